from . import param
from .lru_cache import lru_cache
from . import tree_util
from .errors import *
from .weight import *
from .discrete import *
from .continuous import *
from .sharpness import *
from .search import *
from .rhi import *
from .rearrange import *
from .report import IneqReport, make_report, worst, all_passed, dumps, PASS, FAIL, DIVERGENT
from .io import load_weight, save_weight, load_sequence, save_sequence, weight_from_dict, weight_to_dict
from . import symbolic
from . import generate
from .selftest import run_selftest
