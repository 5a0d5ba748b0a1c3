"""Tangent vector fields on affine diagonal quadrics, decided exactly."""
