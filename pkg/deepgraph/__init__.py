from .operators import *  # noqa: F401,F403
from .config import *  # noqa: F401,F403
from .fpgroup import *  # noqa: F401,F403
from .catalog import *  # noqa: F401,F403
from .spin import *  # noqa: F401,F403
from .oracles import *  # noqa: F401,F403
from .graph import *  # noqa: F401,F403
from .analytics import *  # noqa: F401,F403
from .cache import *  # noqa: F401,F403
from .claims import *  # noqa: F401,F403

version = "0.1"
