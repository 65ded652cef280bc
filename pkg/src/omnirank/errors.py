"""Error taxonomy shared across the pipeline.

Each class maps to a CLI exit code so stage failures are distinguishable
from the shell: config 2, data 3, numeric 4.
"""


class OmniRankError(Exception):
    exit_code = 1


class ConfigError(OmniRankError):
    exit_code = 2


class DataError(OmniRankError):
    exit_code = 3


class NumericError(OmniRankError):
    exit_code = 4
