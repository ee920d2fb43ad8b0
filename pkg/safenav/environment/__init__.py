"""Define the gymnasium environment hiding the true vehicle state."""

from .environment import *
from .actions import *
