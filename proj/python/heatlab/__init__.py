try:
    from ._heatlab import *  # noqa: F401,F403
    from ._heatlab import __doc__  # noqa: F401
except ImportError:  # pragma: no cover - build-tree layout
    from _heatlab import *  # noqa: F401,F403
    from _heatlab import __doc__  # noqa: F401
