import os
import yaml

from typing import Optional, List, Dict
from yaml import YAMLError

from ...helpers import get_os_path


def read(p: str, silent: bool = False) -> Optional[List | Dict]:
    """
    Loads a YAML scenario file and returns it

    Args:
        p (str): The path, relative to the working directory
        silent (bool, optional): Supress any logger output. Defaults to False.

    Returns:
        Optional[List | Dict]: The read YAML data, None if missing or invalid
    """

    from ...log import Logger, log_exception

    logger = Logger.YAML
    yaml_path = get_os_path(p, from_root=True)

    try:
        with open(yaml_path, "r", encoding="utf-8") as f:
            file = yaml.safe_load(f)

            if not silent:
                logger.debug(f"Read file at: '{p}'")

            return file

    except YAMLError as e:
        if not silent:
            logger.error(f"Tried reading a file at: '{p}' but its syntax is invalid: [{e}]")

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
    Saves data to a YAML file and validates it by reading it back

    Returns:
        bool: True if correctly written to, otherwise False
    """

    from ...log import Logger, log_exception

    logger = Logger.YAML
    yaml_path = get_os_path(p, from_root=True)

    os.makedirs(os.path.dirname(yaml_path), exist_ok=True)

    try:
        with open(yaml_path, "w", encoding="utf-8") as f:
            yaml.safe_dump(data, f, default_flow_style=None, sort_keys=False, allow_unicode=True)

        if not silent:
            logger.debug(f"Wrote file at: '{p}'")

        if read(p, silent=silent) == data:
            return True

        logger.error("Written file did not pass validation (mismatched data)")

        return False

    except YAMLError as e:
        if not silent:
            logger.error(f"Could not write YAML to '{p}': [{e}]")

        return False

    except Exception as e:
        log_exception(e, logger)

        return False
