"""Exact modules, structure checks, and flag reconstruction for the
q-tetrahedron algebra over Q(q)."""

from qtetra.scalars import FieldContext, SYMBOLIC, specialized

__all__ = ['FieldContext', 'SYMBOLIC', 'specialized']
