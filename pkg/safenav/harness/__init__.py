"""Support for running experiments and reporting their results."""

from .config import *
from .episode import *
from .batch import *
from .report import *
