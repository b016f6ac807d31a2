from .definitions import *
