"""Hide binary data in text generated by walking a word-level Markov chain."""

from .codec import (
    CodecConfig,
    StegoText,
    decode,
    decode_fixed,
    decode_fixed_prefix,
    detokenize,
    encode,
    encode_fixed,
    random_text,
    text_to_states,
)
from .errors import (
    BadHeader,
    ConfigMismatch,
    DecodeError,
    DegenerateModel,
    MalformedModelFile,
    NoOutboundState,
    NumberOutOfRange,
    PayloadTooLarge,
    StateNotInPartition,
    StegoError,
    TextExhausted,
    UnknownWord,
)
from .partition import (
    NatRange,
    apportion,
    state_for_number,
    subrange_for_number,
    subrange_for_state,
    subranges,
)
from .textmodel import (
    START,
    START_ID,
    MarkovModel,
    build_model,
    build_model_from_text,
    deserialize_model,
    load_model,
    save_model,
    serialize_model,
    tokenize,
)
from .window import BitCursor, WindowedRange, expand, flush_converged, subranges_fast

__version__ = "0.1.0"
