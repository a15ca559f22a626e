"""Exception types shared across the pipeline."""


class PipelineError(Exception):
    """Base class for every toolkit error; the CLI maps these to exit code 2."""


class MalformedLine(PipelineError):
    """A CoNLL-U token line does not have the required shape."""


class CycleDetected(PipelineError):
    """The head relation of a sentence is not acyclic."""


class MultipleRoots(PipelineError):
    """More than one token claims head 0."""


class UnmappedLabel(PipelineError):
    """A dependency or POS label is missing from the tag scheme."""


class InvalidId(PipelineError):
    """A word index does not exist in the tree."""


class EmptyDocument(PipelineError):
    """A document produced no clause frames to aggregate."""


class MissingOffset(PipelineError):
    """A provenance word has no subword alignment in the embedding table."""


class DimMismatch(PipelineError):
    """Embedding or weight dimensionalities do not line up."""


class EmptyBatch(PipelineError):
    """A graph batch was assembled from zero items."""


class MissingLabels(PipelineError):
    """A training step needs per-graph labels that are absent."""


class EmptyEvalSet(PipelineError):
    """Evaluation was asked to run over zero graphs."""


class IndexOutOfRange(PipelineError):
    """An edge endpoint exceeds the declared node count."""
