"""Analytic outage and local-diversity toolkit for Rician fading channels."""

try:
    from ._urdiv import *  # noqa: F401,F403
    from ._urdiv import __doc__  # noqa: F401
except ImportError:
    # Build-tree layout: the extension sits next to the package on sys.path
    # instead of inside it.
    from _urdiv import *  # noqa: F401,F403
