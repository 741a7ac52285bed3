from . import (
    files,
    suites
)
