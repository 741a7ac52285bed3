import os
import json
import math

from typing import Any, Optional, Dict, List, Iterable
from json import JSONDecodeError

from ...helpers import get_os_path


def _finite(data: Any) -> Any:
    if isinstance(data, float) and not math.isfinite(data):
        return "nan" if math.isnan(data) else ("inf" if data > 0 else "-inf")

    if isinstance(data, dict):
        return {key: _finite(value) for key, value in data.items()}

    if isinstance(data, (list, tuple)):
        return [_finite(value) for value in data]

    return data


def dumps(data: List | Dict) -> str:
    """
    Compact JSON with keys in declaration order, the form every report line takes.
    Non-finite floats (an unbounded margin, say) are written as "inf", "-inf" or "nan"
    """

    return json.dumps(_finite(data), ensure_ascii=False, separators=(",", ":"), allow_nan=False)


def read(p: str, silent: bool = False) -> Optional[List | Dict]:
    """
    Loads a JSON file (scenario or payload) and returns it

    Args:
        p (str): The path, relative to the working directory
        silent (bool, optional): Supress any logger output

    Returns:
        Optional[List | Dict]: The read JSON data, None if missing or invalid
    """

    from ...log import Logger, log_exception

    logger = Logger.JSON
    json_path = get_os_path(p, from_root=True)

    try:
        with open(json_path, "r", encoding="utf-8") as f:
            file = json.load(f)

            if not silent:
                logger.debug(f"Read file at: '{p}'")

            return file

    except JSONDecodeError as e:
        if not silent:
            logger.error(
                f"Tried reading a file at '{p}' but its syntax is invalid "
                f"[POS: {e.pos} | LINE No.: {e.lineno} | COL No.: {e.colno}]"
            )

        return None

    except FileNotFoundError:
        if not silent:
            logger.error(f"Tried reading a file at: '{p}' but it doesn't exist")

        return None

    except Exception as e:
        log_exception(e, logger)

        return None


def write(p: str, data: List | Dict, silent: bool = False) -> bool:
    """
    Saves data to a JSON file, creating its directory, and validates it by reading it back

    Returns:
        bool: True if correctly written to, otherwise False
    """

    from ...log import Logger, log_exception

    logger = Logger.JSON
    json_path = get_os_path(p, from_root=True)

    os.makedirs(os.path.dirname(json_path), exist_ok=True)

    try:
        with open(json_path, "w", encoding="utf-8") as f:
            json.dump(_finite(data), f, ensure_ascii=False, indent=2)

        if not silent:
            logger.debug(f"Wrote file at: '{p}'")

        if read(p, silent=silent) == _finite(data):
            return True

        logger.error("Written file did not pass validation (mismatched data)")

        return False

    except (TypeError, ValueError) as e:
        logger.error(f"Data for '{p}' is not JSON serializable: {e}")

        return False

    except Exception as e:
        log_exception(e, logger)

        return False


def write_lines(p: str, records: Iterable[Dict], silent: bool = False) -> bool:
    """
    Saves records as JSON lines, one compact record per line
    """

    from ...log import Logger, log_exception

    logger = Logger.JSON
    lines_path = get_os_path(p, from_root=True)

    os.makedirs(os.path.dirname(lines_path), exist_ok=True)

    try:
        with open(lines_path, "w", encoding="utf-8") as f:
            for record in records:
                f.write(dumps(record) + "\n")

        if not silent:
            logger.debug(f"Wrote report at: '{p}'")

        return True

    except Exception as e:
        log_exception(e, logger)

        return False


def read_lines(p: str) -> List[Dict]:
    with open(get_os_path(p, from_root=True), "r", encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]
