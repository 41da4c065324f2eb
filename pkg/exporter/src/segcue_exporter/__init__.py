"""segcue-exporter: bridge pretrained phoneme LMs to the segcue trace format."""

from .corpus_text import ExportError, read_utterances
from .export import ExportJob, export
from .models import HFCausalModel, StubModel, load_model

__version__ = "0.1.0"
