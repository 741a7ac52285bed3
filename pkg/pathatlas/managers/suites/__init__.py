from .manager import SuiteManager
