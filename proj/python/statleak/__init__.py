"""Byte-statistics side-channel analysis of labeled file corpora.

Thin Python wrapper around the compiled core. The main operations are:

- ``fingerprint_bytes`` / ``fingerprint_file``: the eight byte statistics
- ``ingest_corpus`` / ``read_arff`` / ``write_arff``: dataset handling
- ``train`` / ``cross_validate`` / ``learning_curve``: classifiers
- ``rank_attributes`` / ``select_subset``: information-leakage ranking
- ``make_synthetic_corpus`` / ``audit``: corpus synthesis and the full audit
"""

try:
    from ._statleak import *  # noqa: F401,F403  (installed package layout)
    from ._statleak import __version__  # noqa: F401
except ImportError:  # in-tree builds put the module next to the build dir
    from _statleak import *  # noqa: F401,F403
    from _statleak import __version__  # noqa: F401
