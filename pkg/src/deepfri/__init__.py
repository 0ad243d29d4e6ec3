"""Reed-Solomon proximity testing over binary fields: FRI, DEEP-FRI, DEEP-ALI
and exhaustive distance experiments."""
from .channel import Channel
from .codes import RsParams, list_decode_rs, nearest_codewords, rs_distance
from .deep_fri import deep_commit, deep_exact_accept, deep_verify, make_deep_params
from .domains import Subspace
from .errors import DeepFriError, SearchSpaceTooLarge
from .field import GF, FieldElement, field
from .fri import fri_commit, fri_exact_accept, fri_verify, make_fri_params
from .poly import Evaluations, Polynomial, encode, interpolate

__version__ = "0.1.0"
