from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from ...conf import conf
from ...errors import UnknownSuiteError
from ...helpers import get_rng
from ...log import Logger
from ...objects import Check

from .suitelist import SuiteList

logger = Logger.SUITES


class SuiteManager:
    """
    Runs the invariant suites listed in the config; case `c` of suite `s` always draws from
    the stream seeded by (seed, index of s, c), so reports do not depend on the worker count
    """

    def __init__(self, tol: float = 1e-7, workers: Optional[int] = None) -> None:
        self.suitelist = SuiteList(tol)
        self.workers = conf.workers if workers is None else max(1, workers)

    def known(self) -> list[str]:
        return list(conf.suites)

    def _suite(self, name: str):
        suite = getattr(self.suitelist, name.replace("-", "_"), None)

        if callable(suite) and getattr(suite, "suite_name", None) == name:
            return suite

        logger.error(f"'{name}' is not a valid suite")
        raise UnknownSuiteError(name, self.known())

    def resolve(self, selector: str) -> list[str]:
        """
        "all" or a comma separated list of suite names, in config order
        """

        if selector.strip() == "all":
            return self.known()

        wanted = [name.strip() for name in selector.split(",") if name.strip()]

        for name in wanted:
            if name not in conf.suites:
                raise UnknownSuiteError(name, self.known())

            self._suite(name)

        return [name for name in conf.suites if name in wanted]

    def _case(self, job: tuple[str, int, int]) -> Check:
        name, seed, case = job
        rng = get_rng([seed, conf.suites.index(name), case])
        return self._suite(name)(rng)

    def run(self, selector: str = "all", seed: int = 0, count: int = 1) -> list[Check]:
        names = self.resolve(selector)
        jobs = [(name, seed, case) for name in names for case in range(count)]

        logger.info(f"Running {len(names)} suites x {count} cases on {self.workers} workers (seed {seed})")

        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            checks = list(pool.map(self._case, jobs))

        failed = sum(check.failed for check in checks)

        if failed:
            logger.warning(f"{failed} of {len(checks)} checks failed")
        else:
            logger.info(f"All {len(checks)} checks passed or were indeterminate")

        return checks
