"""Forward windowing around the batch Union-Find decoder.

Each step decodes ``c + b`` sheets, commits the correction on the bottom
``c`` layers and raises the window by ``c``. Committed edges are XOR-ed into
the error history, so half-paths cut at the commit boundary reappear as
artificial defects on the next window's bottom sheet.
"""

import numpy as np

from ..graph import build_template
from ..noise import SheetSyndrome
from .uf import BatchWindow, uf_decode


class ForwardUFDecoder:
    def __init__(self, family, d, c=None, b=None, backend=None, template=None):
        self.template = template if template is not None else build_template(family, d)
        self.d = self.template.d
        self.c = self.d if c is None else int(c)
        self.b = self.d if b is None else int(b)
        if self.c < 1 or self.b < 0:
            raise ValueError("need c >= 1 and b >= 0")
        self.backend = backend
        self.window = BatchWindow.build(self.template, self.c, self.b)
        self.syndrome = SheetSyndrome(self.template)
        g = self.window.graph
        keep = (g.edge_t < self.c) & (g.edge_k >= 0)
        self._commit_e = np.flatnonzero(keep)
        self._commit_t = g.edge_t[keep]
        self._commit_k = g.edge_k[keep]
        self.start = 0
        self.fed = 0
        self.residual = np.zeros((0, self.template.n_edges), dtype=np.bool_)
        self.committed = np.zeros((0, self.template.n_edges), dtype=np.bool_)

    @property
    def n_sheets(self):
        return self.c + self.b

    def _reserve(self, rows):
        if rows > len(self.residual):
            extra = rows - len(self.residual)
            pad = np.zeros((extra, self.template.n_edges), dtype=np.bool_)
            self.residual = np.concatenate([self.residual, pad])
            self.committed = np.concatenate([self.committed, pad])

    def feed(self, layers):
        """Append error layers to the history (they need not be decodable yet)."""
        layers = np.asarray(layers, dtype=np.bool_)
        self._reserve(self.fed + len(layers))
        self.residual[self.fed:self.fed + len(layers)] ^= layers
        self.fed += len(layers)

    def window_defects(self):
        s, L = self.start, self.n_sheets
        self._reserve(s + L)
        previous = self.residual[s - 1] if s > 0 else None
        return self.syndrome.many(self.residual[s:s + L], previous)

    def step(self):
        """Decode the current window, commit its bottom ``c`` layers, raise it.

        Returns ``(first_layer, chunk)``: the committed edges of absolute layers
        ``first_layer .. first_layer + c - 1``.
        """
        s = self.start
        rows = self.window_defects()
        self.window.set_sheet_defects(rows)
        corr = uf_decode(self.window, self.backend)
        chunk = np.zeros((self.c, self.template.n_edges), dtype=np.bool_)
        hit = corr[self._commit_e]
        chunk[self._commit_t[hit], self._commit_k[hit]] = True
        self.committed[s:s + self.c] ^= chunk
        self.residual[s:s + self.c] ^= chunk
        self.start += self.c
        return s, chunk

    def run(self, layers, max_flush=None):
        """Decode a whole stream, flushing with noiseless rounds until nothing is left.

        Returns the committed correction per absolute layer.
        """
        self.feed(layers)
        n = len(layers)
        while self.start + self.n_sheets <= n:
            self.step()
        limit = n + (max_flush if max_flush is not None else 20 * self.n_sheets)
        while True:
            if self.start >= n and not self.window_defects().any():
                break
            if self.start > limit:
                raise RuntimeError("forward decoder failed to drain the stream")
            self.step()
        return self.committed[: max(self.start, n)].copy()


def forward_step(decoder):
    """One forward-method step on ``decoder``; see ``ForwardUFDecoder.step``."""
    return decoder.step()
