"""Train-track rewriting on surfaces with exact rational bookkeeping.

Subpackages group into three layers: combinatorial surfaces and train
tracks with their complexity orders (surfaces, track, curves, blocks),
the rewriting calculus and its scheduler (rewrite, schedule), and the
holonomy / admissibility side (interval, marking).  textio and cli wrap
them in a stable text format and command line.
"""

from __future__ import annotations

__version__ = "0.1.0"
