"""Exact checker for shifted affine iquantum-group relations in their
q-difference-operator representations."""

__version__ = "1.0.0"
