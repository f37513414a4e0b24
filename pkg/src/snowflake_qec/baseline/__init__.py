from .forward import ForwardUFDecoder, forward_step
from .uf import BatchWindow, uf_decode

__all__ = ["BatchWindow", "ForwardUFDecoder", "forward_step", "uf_decode"]
