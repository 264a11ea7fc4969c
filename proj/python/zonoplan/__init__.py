from ._zonoplan import *  # noqa: F401,F403
from ._zonoplan import bench  # noqa: F401
