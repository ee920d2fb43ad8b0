"""Support for online Monte-Carlo planners."""

from .tree import *
from .pomcp import *
from .ccpomcp import *
