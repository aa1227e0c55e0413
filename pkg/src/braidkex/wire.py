"""Two-party protocol sessions over a reliable byte stream.

Frames are a 4-byte big-endian payload length followed by a UTF-8 JSON
object ``{"type", "sender", "body"}``.  Each side sends, in order::

    hello   {"protocol", "public"}     public parameters, checked by the peer
    commit  {"words": [[...], ...]}    this side's protocol message
    done    {}

and an ``error`` frame ``{"reason"}`` in place of any of them on failure.
Private keys never leave the Party object.
"""

from __future__ import annotations

import json
import socket
import struct
import time
from dataclasses import dataclass, field
from typing import BinaryIO, Optional

from .braid import BraidError, Word
from .protocols import Party, ProtocolError, SharedKey
from .scenario import Scenario, public_json, word_json

FRAME_TYPES = ("hello", "commit", "done", "error")
MAX_FRAME = 1 << 24
_LEN = struct.Struct(">I")


class WireError(RuntimeError):
    """Framing or protocol violation on the wire (CLI exit code 4)."""


def encode_frame(ftype: str, sender: str, body: dict) -> bytes:
    if ftype not in FRAME_TYPES:
        raise WireError(f"unknown frame type {ftype!r}")
    payload = json.dumps({"type": ftype, "sender": sender, "body": body}, separators=(",", ":")).encode("utf-8")
    return _LEN.pack(len(payload)) + payload


def _read_exact(stream: BinaryIO, size: int) -> bytes:
    chunks = []
    remaining = size
    while remaining:
        chunk = stream.read(remaining)
        if not chunk:
            raise WireError(f"truncated frame: expected {size} bytes, got {size - remaining}")
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)


def read_frame(stream: BinaryIO) -> dict:
    (size,) = _LEN.unpack(_read_exact(stream, _LEN.size))
    if size > MAX_FRAME:
        raise WireError(f"frame of {size} bytes exceeds the limit")
    try:
        frame = json.loads(_read_exact(stream, size).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise WireError(f"frame payload is not JSON: {exc}") from exc
    if not isinstance(frame, dict) or frame.get("type") not in FRAME_TYPES:
        raise WireError(f"bad frame {frame!r}")
    if frame.get("sender") not in ("alice", "bob") or not isinstance(frame.get("body"), dict):
        raise WireError(f"bad frame header {frame!r}")
    return frame


@dataclass
class SessionResult:
    key: Optional[SharedKey] = None
    sent: list[dict] = field(default_factory=list)
    received: list[dict] = field(default_factory=list)


class _Channel:
    def __init__(self, role: str, rfile: BinaryIO, wfile: BinaryIO, result_log: SessionResult) -> None:
        self.role = role
        self.peer = "bob" if role == "alice" else "alice"
        self.rfile, self.wfile = rfile, wfile
        self.log = result_log

    def send(self, ftype: str, body: dict) -> None:
        self.wfile.write(encode_frame(ftype, self.role, body))
        self.wfile.flush()
        self.log.sent.append({"type": ftype, "sender": self.role, "body": body})

    def fail(self, reason: str) -> WireError:
        try:
            self.send("error", {"reason": reason})
        except (OSError, ValueError):
            pass
        return WireError(reason)

    def expect(self, ftype: str) -> dict:
        frame = read_frame(self.rfile)
        self.log.received.append(frame)
        if frame["type"] == "error":
            raise WireError(f"peer reported an error: {frame['body'].get('reason')}")
        if frame["sender"] != self.peer:
            raise self.fail(f"expected a frame from {self.peer}, got one from {frame['sender']}")
        if frame["type"] != ftype:
            raise self.fail(f"expected {ftype}, got {frame['type']}")
        return frame["body"]


def run_session(role: str, sc: Scenario, rfile: BinaryIO, wfile: BinaryIO) -> SessionResult:
    """Run one side of the scenario's protocol against a peer on the stream."""
    if role not in ("alice", "bob"):
        raise WireError(f"role must be 'alice' or 'bob', got {role!r}")
    party = Party(sc.public, sc.alice if role == "alice" else sc.bob, role)
    result = SessionResult()
    ch = _Channel(role, rfile, wfile, result)

    hello = {"protocol": sc.protocol, "public": public_json(sc.public)}
    ch.send("hello", hello)
    peer_hello = ch.expect("hello")
    if peer_hello != hello:
        raise ch.fail("group parameters in hello do not match")

    ch.send("commit", {"words": [word_json(w) for w in party.commit()]})
    body = ch.expect("commit")
    try:
        words = [sc.ctx.check(Word(tuple(int(x) for x in w))) for w in body["words"]]
        if any(0 in w.letters for w in words):
            raise BraidError("zero letter")
        result.key = party.receive(words)
    except (KeyError, TypeError, ValueError, BraidError, ProtocolError) as exc:
        raise ch.fail(f"bad commit: {exc}") from exc

    ch.send("done", {})
    ch.expect("done")
    return result


def parse_endpoint(text: str) -> tuple[str, str, int]:
    """``listen:HOST:PORT`` or ``connect:HOST:PORT``."""
    try:
        mode, host, port = text.rsplit(":", 2)
        if mode not in ("listen", "connect"):
            raise ValueError(mode)
        return mode, host, int(port)
    except ValueError as exc:
        raise WireError(f"bad endpoint {text!r}; use listen:HOST:PORT or connect:HOST:PORT") from exc


def open_endpoint(text: str, timeout: float = 30.0, on_listen=None) -> socket.socket:
    mode, host, port = parse_endpoint(text)
    if mode == "listen":
        with socket.create_server((host, port)) as server:
            server.settimeout(timeout)
            if on_listen is not None:
                on_listen(server.getsockname())
            conn, _ = server.accept()
            conn.settimeout(timeout)
            return conn
    deadline = time.monotonic() + timeout
    while True:
        try:
            conn = socket.create_connection((host, port), timeout=timeout)
            return conn
        except OSError:
            if time.monotonic() > deadline:
                raise
            time.sleep(0.05)


def session_over_socket(role: str, sc: Scenario, conn: socket.socket) -> SessionResult:
    # closing the buffered writer flushes it, which can hit a peer that already hung up
    try:
        with conn, conn.makefile("rb") as rfile, conn.makefile("wb") as wfile:
            return run_session(role, sc, rfile, wfile)
    except OSError as exc:
        if isinstance(exc.__context__, WireError):
            raise exc.__context__ from None
        raise WireError(f"connection failed: {exc}") from exc

