"""Jet-scalar backend selection: compiled extension if available, else pure Python.

Both backends produce bit-identical results (see _jetcore_py), so the choice
only affects speed.  ``python -m moufang.bench`` compares them.
"""

try:
    from moufang import _jetcore as impl

    BACKEND = "compiled"
except ImportError:  # extension not built; fall back to the reference module
    from moufang import _jetcore_py as impl

    BACKEND = "pure"

Dual = impl.Dual
PairJet = impl.PairJet
