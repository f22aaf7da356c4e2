"""Finite computations with self-similarity systems: a small category ``A``
and a bimodule ``M`` over it, the gluing functor ``M (x) -``, nondegeneracy
checks, coalgebras, and depth-n approximations of the spaces they define."""
from ._kernel import BACKEND
from .approximator import (Affine, Approximation, Cell, DepthModel, RealizationHints, StreamGenerator,
                           StreamVerdict, approximate_space, cell_count, depth_model, enumerate_cells,
                           geometric_realization, is_discretely_separated, parse_stream, pointed_classes,
                           stream_equal_up_to, touching_graph)
from .bimodule import Bimodule, TensorResult, hom_bimodule, iterate_G, tensor, tensor_map, validate_bimodule
from .coalgebra import Coalgebra, check_lambek, finite_terminal_search, is_coalgebra_map
from .errors import RealizationError, ResourceLimitError, SystemFileError
from .fincat import (CoPresheaf, FinCategory, NatTransformation, category_of_elements, is_cofiltered,
                     representable)
from .gallery import GALLERY, load
from .nondegen import is_nondegenerate, is_valid_system
from .systemfile import emit_system, parse_system, parse_text

__version__ = "0.1.0"
