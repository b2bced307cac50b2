from .prepare_cmd import PrepareCmd
from .train_cmd import TrainCmd
from .sr_cmd import SrCmd
from .eval_cmd import EvalCmd
from .bench_cmd import BenchCmd
from .ablate_cmd import AblateCmd
from .features_cmd import FeaturesCmd


COMMANDS = {
    'prepare'  : PrepareCmd,
    'train'    : TrainCmd,
    'sr'       : SrCmd,
    'eval'     : EvalCmd,
    'bench'    : BenchCmd,
    'ablate'   : AblateCmd,
    'features' : FeaturesCmd,
}
