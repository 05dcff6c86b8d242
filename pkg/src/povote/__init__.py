from .__about__ import __version__
from .logger import Logger

log = Logger(__name__)
