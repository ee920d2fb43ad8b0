"""Support for high- and low-level planners."""

from .agent import *
from .static import *
from .online import *
from .llp import *
