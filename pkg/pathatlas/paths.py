import os

from strenum import StrEnum

from .helpers import get_os_path

HOME = os.path.expanduser(os.getenv("PATHATLAS_HOME", "~/.pathatlas"))


class Path(StrEnum):
    """
    Files and directories used by pathatlas
    """

    CONFIG = os.getenv("PATHATLAS_CONFIG") or get_os_path("config/pathatlas.yml")
    LOG_LATEST = get_os_path(os.path.join(HOME, "logs/latest.log"), from_root=True)
    LOG_HISTORY = get_os_path(os.path.join(HOME, "logs/history"), from_root=True)
    LOG_TRACEBACKS = get_os_path(os.path.join(HOME, "logs/tracebacks"), from_root=True)
