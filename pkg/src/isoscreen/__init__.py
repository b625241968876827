"""Screen adelic Galois images of elliptic curves for isolated points on X1(n)."""

from .degrees import PrimitiveEntry, map_degree, primitive_degrees, primitive_target
from .genus import CongruenceSignature, DeterminantError, genus_of_image, genus_X1
from .gl2core import ImageGroup, Mat2, OrbitTable, StabilizerChain
from .levels import LevelProfile, nonsurjective_primes, reduce_level
from .pipeline import ScreeningReport, batch_summary, screen, screen_batch
from .records import ImageRecord, RecordError, parse_record, read_records

__version__ = "0.1.0"

__all__ = [
    "CongruenceSignature",
    "DeterminantError",
    "ImageGroup",
    "ImageRecord",
    "LevelProfile",
    "Mat2",
    "OrbitTable",
    "PrimitiveEntry",
    "RecordError",
    "ScreeningReport",
    "StabilizerChain",
    "batch_summary",
    "genus_X1",
    "genus_of_image",
    "map_degree",
    "nonsurjective_primes",
    "parse_record",
    "primitive_degrees",
    "primitive_target",
    "read_records",
    "reduce_level",
    "screen",
    "screen_batch",
]
