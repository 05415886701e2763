"""Exact computations on O(SL_q(2)), the Podles coideal subalgebras B_c and their
two-dimensional covariant first order calculi, over Q(p) with p^2 = q."""

__version__ = "0.1.0"
