from .config import ConfigError, RunConfig, load_config, load_patch
from .suite import DuplicateTestId, SchemaError, TestCase, TestSuite, load_suite

__all__ = [
    "ConfigError", "RunConfig", "load_config", "load_patch", "DuplicateTestId",
    "SchemaError", "TestCase", "TestSuite", "load_suite",
]
