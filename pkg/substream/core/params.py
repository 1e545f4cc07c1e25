"""
Flat `key = value` parameter files for the benchmark harness.

    # abrupt-change panel
    d = 200
    k = 10
    sigma = 1e-5
    trackers = grouse,petrels
    brand.discount = 0.98

Values that parse as Python literals become those literals,
everything else is kept as a string. Dotted keys (`brand.discount`)
are tracker parameters and are collected per tracker name.
"""
import ast
import os
import logging

from .errors import ConfigError

logger = logging.getLogger(__name__)

__all__ = [
    'ParamClass',
    'BenchParameters',
    'read_param_file',
]

COMMENT_CHAR = '#'

def _parse_value(val : str):
    """ A Python literal if `val` is one, otherwise the stripped string """
    val = val.strip()
    try:
        return ast.literal_eval(val)
    except (ValueError, SyntaxError): # not a literal, leave it as a string.
        return val

class ParamClass():
    """
    Generic holder for `key = value` parameters read out of text.

    Subclasses set PARAM_PREFIX to pick up only the keys that
    start with it (the prefix is stripped); the base class keeps
    every key. Parsed entries become attributes.
    """

    PARAM_PREFIX = ''

    def __init__(self, description_string : str = '', source : str = '<string>'):
        if not isinstance(description_string, str):
            raise ValueError(
                f"{self.__class__.__name__} can only be initialized "
                "from the text of a parameter file."
            )
        self._source = source
        for lineno, line in enumerate(description_string.splitlines(), start = 1):
            line = line.split(COMMENT_CHAR)[0].strip()
            if not line:
                continue
            if line.count('=') != 1:
                raise ConfigError(
                    f"{source}:{lineno}",
                    f"expected exactly one 'key = value' assignment, got {line!r}"
                )
            param, val = (part.strip() for part in line.split('='))
            if not param:
                raise ConfigError(f"{source}:{lineno}", "missing key")
            if not param.startswith(self.__class__.PARAM_PREFIX):
                continue
            self._store(param[len(self.__class__.PARAM_PREFIX):], _parse_value(val))

    def _store(self, param : str, val):
        setattr(self, param, val)

    def as_dict(self)->dict:
        return {key : val for key, val in self.__dict__.items() if not key.startswith('_')}

    def __repr__(self)->str:
        retstr = f"{self.__class__.__name__} : \n"
        for param, param_val in self.as_dict().items():
            retstr += f"\t{param} : {param_val}\n"
        return retstr

class BenchParameters(ParamClass):
    """
    Harness parameters. Plain keys map onto CLI flags (dashes and
    underscores are interchangeable); `<tracker>.<param>` keys go
    to `tracker_params[<tracker>][<param>]`.
    """

    def __init__(self, description_string : str = '', source : str = '<string>'):
        self.tracker_params = {}
        super().__init__(description_string, source)

    def _store(self, param : str, val):
        if '.' in param:
            tracker, key = param.split('.', 1)
            self.tracker_params.setdefault(tracker.strip(), {})[key.strip()] = val
            return
        setattr(self, param.replace('-', '_'), val)

    def flags(self)->dict:
        """ Everything except tracker parameters """
        return {key : val for key, val in self.as_dict().items() if key != 'tracker_params'}

def read_param_file(path : str)->BenchParameters:
    """ Reads a parameter file from disk """
    if not os.path.isfile(path):
        raise ConfigError('config', f"no such parameter file: {path}")
    with open(path, 'r', encoding='utf-8') as f:
        text = f.read()
    params = BenchParameters(text, source = path)
    logger.debug("Read %d parameters from %s", len(params.as_dict()), path)
    return params
