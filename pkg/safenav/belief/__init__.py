"""Support for particle beliefs over the agent state."""

from .particles import *
