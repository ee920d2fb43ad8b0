"""Support for the grid navigation world and its generative model."""

from .errors import *
from .cells import *
from .state import *
from .actions import *
from .rules import *
from .maps import *
from .builtin import *
from .engine import *
