"""Internal helpers for sniffing and replaying binary stream heads."""

import gzip
from typing import BinaryIO

GZIP_MAGIC = b"\x1f\x8b"


class PushbackReader:
    """Binary reader that replays already-consumed head bytes before the wrapped stream.

    Lets format sniffing work on non-seekable sources (pipes, sockets, raw
    network bodies) without buffering the whole input.
    """

    def __init__(self, head: bytes, stream: BinaryIO):
        self._head = head
        self._stream = stream

    def read(self, size: int = -1) -> bytes:
        if self._head:
            if size is None or size < 0:
                head, self._head = self._head, b""
                return head + self._stream.read()
            take, self._head = self._head[:size], self._head[size:]
            # Short reads are fine: every consumer loops until b"".
            return take
        return self._stream.read(size if size is not None else -1)


def sniff_head(stream: BinaryIO, n: int = 2) -> tuple[bytes, BinaryIO]:
    """Read the first ``n`` bytes and return them plus a stream that replays them."""
    head = stream.read(n)
    return head, PushbackReader(head, stream)


def open_maybe_gzip(stream: BinaryIO, compressed: bool | None = None) -> BinaryIO:
    """Wrap ``stream`` in a gzip decompressor when needed.

    ``compressed=None`` sniffs the two gzip magic bytes (0x1f 0x8b); True and
    False force the respective interpretation.
    """
    if compressed is None:
        head, stream = sniff_head(stream)
        compressed = head == GZIP_MAGIC
    if compressed:
        return gzip.GzipFile(fileobj=stream, mode="rb")  # type: ignore[return-value]
    return stream
