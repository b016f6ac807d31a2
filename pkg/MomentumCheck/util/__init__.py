from .data_util import *
