"""Block codec: partition, per-block sparse encoding, SSC1 (de)serialization.

A signal is split into Q disjoint blocks of length N_b (the tail block is
zero-padded and the pad length recorded). Each block is encoded completely
independently -- by plain matching pursuit, self-projected matching pursuit,
or, at the orthonormal point M == N_b, by thresholding the orthonormal-basis
expansion -- to a per-block residual target derived from one global SNR
figure, which guarantees the decoded signal meets that SNR globally.

Wire format "SSC1" (all integers little-endian, unsigned 32-bit unless
noted):

    magic        4 bytes  'SSC1'
    version      u32      currently 1
    case         u32      1=dft 2=dct 3=dst 4=mixed
    num_atoms    u32      M
    block_len    u32      N_b
    num_blocks   u32      Q
    pad_len      u32      zeros appended to the final block
    sample_rate  u32      Hz
    target_snr   f64      dB
    method       u32      1=mp 2=spmp 3=basis

followed by Q block records, each ``k_q`` (u32) then ``k_q`` entries of
(index u32, coefficient f64) -- or (index u32, re f64, im f64) for the
Fourier case -- with indices strictly increasing inside a record.
"""

from __future__ import annotations

import json
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._validation import as_1d_float
from .dictionary import Case, DictionarySpec, conjugate_partner, make_atom
from .pursuit import ConvergenceError, mp, spmp
from .transforms import inner_products

__all__ = [
    "MAGIC",
    "METHODS",
    "BlockEncodingError",
    "BlockRecord",
    "EncodeResult",
    "EncodedStream",
    "PartitionedSignal",
    "StreamFormatError",
    "StreamHeader",
    "block_tolerance",
    "decode",
    "encode",
    "parse_stream",
    "partition",
    "read_stream",
    "reconstruct_block",
    "serialize_stream",
    "stream_to_json",
    "write_stream",
]

MAGIC = b"SSC1"
VERSION = 1
METHODS = ("mp", "spmp", "basis")
_METHOD_CODES = {"mp": 1, "spmp": 2, "basis": 3}
_HEADER_FMT = "<4sIIIIIIIdI"
_HEADER_SIZE = struct.calcsize(_HEADER_FMT)


class StreamFormatError(ValueError):
    """Malformed SSC1 data; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class BlockEncodingError(RuntimeError):
    """A pursuit abort, tagged with the index of the offending block."""

    def __init__(self, block_index: int, cause: Exception):
        super().__init__(f"block {block_index}: {cause}")
        self.block_index = block_index
        self.cause = cause


@dataclass
class PartitionedSignal:
    """Q disjoint blocks of uniform length; concatenation minus the pad
    recovers the original signal exactly."""

    blocks: np.ndarray  # (Q, block_len)
    total_len: int
    pad_len: int

    @property
    def num_blocks(self) -> int:
        return self.blocks.shape[0]

    @property
    def block_len(self) -> int:
        return self.blocks.shape[1]

    def concatenate(self) -> np.ndarray:
        return self.blocks.reshape(-1)[: self.total_len]


def partition(signal, block_len: int) -> PartitionedSignal:
    """Split into ceil(N / block_len) blocks, zero-padding the tail."""
    x = as_1d_float(signal, "signal")
    if block_len < 2:
        raise ValueError("block_len must be at least 2")
    q = -(-x.size // block_len)
    padded = np.zeros(q * block_len)
    padded[: x.size] = x
    return PartitionedSignal(
        blocks=padded.reshape(q, block_len),
        total_len=x.size,
        pad_len=q * block_len - x.size,
    )


def block_tolerance(block, target_snr: float) -> float:
    """Residual-norm target making one block individually meet ``target_snr``.

    A silent block returns 0.0 and is encoded with no coefficients.
    """
    if not np.isfinite(target_snr):
        raise ValueError("target_snr must be finite")
    norm = float(np.linalg.norm(as_1d_float(block, "block")))
    return norm * 10.0 ** (-target_snr / 20.0)


@dataclass
class StreamHeader:
    case: Case
    num_atoms: int
    block_len: int
    num_blocks: int
    pad_len: int
    sample_rate: int
    target_snr: float
    method: str
    version: int = VERSION

    def spec(self) -> DictionarySpec:
        return DictionarySpec(self.case, self.num_atoms, self.block_len)

    @property
    def signal_len(self) -> int:
        return self.num_blocks * self.block_len - self.pad_len


@dataclass(eq=False)
class BlockRecord:
    """Sparse coefficients of one block: parallel arrays sorted by index."""

    indices: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.uint32)
        order = np.argsort(self.indices, kind="stable")
        self.indices = self.indices[order]
        self.coefficients = np.asarray(self.coefficients)[order]

    def __len__(self) -> int:
        return int(self.indices.size)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BlockRecord)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.coefficients, other.coefficients)
        )

    @classmethod
    def from_coefficients(cls, coefficients: dict, fourier: bool) -> "BlockRecord":
        indices = np.array(sorted(coefficients), dtype=np.uint32)
        dtype = np.complex128 if fourier else np.float64
        values = np.array([coefficients[int(i)] for i in indices], dtype=dtype)
        return cls(indices, values)


@dataclass(eq=False)
class EncodedStream:
    header: StreamHeader
    records: list[BlockRecord] = field(default_factory=list)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EncodedStream)
            and self.header == other.header
            and self.records == other.records
        )

    @property
    def total_coefficients(self) -> int:
        return sum(len(r) for r in self.records)


@dataclass
class EncodeResult:
    """Encoded stream plus per-block diagnostics not carried on the wire."""

    stream: EncodedStream
    iteration_logs: list[list[int]]
    residual_norms: list[float]


def _encode_block_basis(block: np.ndarray, spec: DictionarySpec, rho: float) -> BlockRecord:
    """Orthonormal-basis thresholding: keep the largest-magnitude expansion
    coefficients, re-checking the residual after each kept term (Parseval),
    until the residual target is met. Only valid at M == N_b."""
    coeffs = inner_products(block, spec)
    magnitude = np.abs(coeffs)
    order = np.argsort(-magnitude, kind="stable")
    total = float(block @ block)
    budget = rho * rho

    kept: dict[int, float | complex] = {}
    remaining = total
    fourier = spec.case is Case.FOURIER
    for pos in order:
        if remaining <= budget:
            break
        index = int(pos) + 1
        if index in kept:
            continue
        kept[index] = coeffs[pos]
        remaining -= magnitude[pos] ** 2
        if fourier:
            partner = conjugate_partner(index, spec.num_atoms)
            if partner is not None:
                kept[partner] = coeffs[partner - 1]
                remaining -= magnitude[partner - 1] ** 2
    return BlockRecord.from_coefficients(kept, fourier)


def _encode_block(args):
    (q, block, spec, target_snr, method, epsilon) = args
    rho = block_tolerance(block, target_snr)
    if rho == 0.0:
        empty = BlockRecord.from_coefficients({}, spec.case is Case.FOURIER)
        return empty, [], 0.0
    try:
        if method == "basis":
            record = _encode_block_basis(block, spec, rho)
            recon = reconstruct_block_with_spec(record, spec)
            return record, [], float(np.linalg.norm(block - recon))
        run = spmp(block, spec, rho, epsilon) if method == "spmp" else mp(block, spec, rho)
    except ConvergenceError as exc:
        raise BlockEncodingError(q, exc) from exc
    record = BlockRecord.from_coefficients(run.coefficients, spec.case is Case.FOURIER)
    return record, run.iteration_log, run.residual_norm


def encode(signal, spec: DictionarySpec, target_snr: float, method: str = "spmp", *,
           epsilon: float | None = None, sample_rate: int = 44100,
           jobs: int = 1) -> EncodeResult:
    """Encode a signal as an SSC1 stream of per-block sparse coefficients.

    Blocks are independent; with ``jobs`` > 1 they are encoded by a process
    pool, and records are assembled in block order either way so the output
    is identical for any job count.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if method == "basis" and not spec.is_orthonormal_point:
        raise ValueError(
            "the basis method requires the orthonormal point M == block_len "
            f"(got M={spec.num_atoms}, block_len={spec.block_len})"
        )
    part = partition(signal, spec.block_len)
    tasks = [
        (q, part.blocks[q], spec, float(target_snr), method, epsilon)
        for q in range(part.num_blocks)
    ]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_encode_block, tasks))
    else:
        outcomes = [_encode_block(t) for t in tasks]

    header = StreamHeader(
        case=spec.case,
        num_atoms=spec.num_atoms,
        block_len=spec.block_len,
        num_blocks=part.num_blocks,
        pad_len=part.pad_len,
        sample_rate=int(sample_rate),
        target_snr=float(target_snr),
        method=method,
    )
    return EncodeResult(
        stream=EncodedStream(header, [o[0] for o in outcomes]),
        iteration_logs=[o[1] for o in outcomes],
        residual_norms=[o[2] for o in outcomes],
    )


def reconstruct_block_with_spec(record: BlockRecord, spec: DictionarySpec) -> np.ndarray:
    fourier = spec.case is Case.FOURIER
    out = np.zeros(spec.block_len, dtype=np.complex128 if fourier else np.float64)
    for index, coeff in zip(record.indices, record.coefficients):
        index = int(index)
        if not 1 <= index <= spec.num_atoms:
            raise StreamFormatError(f"atom index {index} out of range [1, {spec.num_atoms}]", 0)
        out += coeff * make_atom(index, spec)
    # conjugate pairing keeps Fourier reconstructions real; drop the
    # residual imaginary rounding noise
    return out.real if fourier else out


def reconstruct_block(record: BlockRecord, header: StreamHeader) -> np.ndarray:
    """Rebuild one block as sum_n c(n) d_n from its sparse record."""
    return reconstruct_block_with_spec(record, header.spec())


def decode(stream: EncodedStream) -> np.ndarray:
    """Reconstruct the full signal: concatenated blocks, pad removed."""
    header = stream.header
    if len(stream.records) != header.num_blocks:
        raise StreamFormatError(
            f"stream holds {len(stream.records)} records but the header says "
            f"{header.num_blocks}", _HEADER_SIZE,
        )
    if header.num_blocks == 0:
        return np.zeros(0)
    spec = header.spec()
    out = np.empty(header.num_blocks * header.block_len)
    for q, record in enumerate(stream.records):
        out[q * header.block_len : (q + 1) * header.block_len] = (
            reconstruct_block_with_spec(record, spec)
        )
    return out[: header.signal_len]


_REAL_ENTRY = np.dtype([("index", "<u4"), ("value", "<f8")])
_COMPLEX_ENTRY = np.dtype([("index", "<u4"), ("re", "<f8"), ("im", "<f8")])


def serialize_stream(stream: EncodedStream) -> bytes:
    header = stream.header
    chunks = [
        struct.pack(
            _HEADER_FMT,
            MAGIC,
            header.version,
            header.case.code,
            header.num_atoms,
            header.block_len,
            header.num_blocks,
            header.pad_len,
            header.sample_rate,
            header.target_snr,
            _METHOD_CODES[header.method],
        )
    ]
    fourier = header.case is Case.FOURIER
    for record in stream.records:
        chunks.append(struct.pack("<I", len(record)))
        if fourier:
            entries = np.empty(len(record), dtype=_COMPLEX_ENTRY)
            entries["index"] = record.indices
            entries["re"] = record.coefficients.real
            entries["im"] = record.coefficients.imag
        else:
            entries = np.empty(len(record), dtype=_REAL_ENTRY)
            entries["index"] = record.indices
            entries["value"] = record.coefficients.real
        chunks.append(entries.tobytes())
    return b"".join(chunks)


def parse_stream(data: bytes) -> EncodedStream:
    """Inverse of :func:`serialize_stream`; raises :class:`StreamFormatError`
    with the byte offset on any malformed or truncated content."""
    if len(data) < _HEADER_SIZE:
        raise StreamFormatError("truncated header", len(data))
    (magic, version, case_code, num_atoms, block_len, num_blocks,
     pad_len, sample_rate, target_snr, method_code) = struct.unpack_from(_HEADER_FMT, data, 0)
    if magic != MAGIC:
        raise StreamFormatError(f"bad magic {magic!r}", 0)
    if version != VERSION:
        raise StreamFormatError(f"unsupported version {version}", 4)
    try:
        case = Case.from_code(case_code)
    except ValueError as exc:
        raise StreamFormatError(str(exc), 8) from exc
    methods = {code: name for name, code in _METHOD_CODES.items()}
    if method_code not in methods:
        raise StreamFormatError(f"unknown method code {method_code}", _HEADER_SIZE - 4)
    if num_atoms < block_len or block_len < 1:
        raise StreamFormatError(
            f"inconsistent sizes: M={num_atoms}, block_len={block_len}", 12
        )
    if num_blocks > 0 and pad_len >= block_len:
        raise StreamFormatError(f"pad_len {pad_len} not smaller than the block length", 24)
    if num_blocks == 0 and pad_len != 0:
        raise StreamFormatError("pad_len must be zero for an empty stream", 24)

    header = StreamHeader(
        case=case,
        num_atoms=num_atoms,
        block_len=block_len,
        num_blocks=num_blocks,
        pad_len=pad_len,
        sample_rate=sample_rate,
        target_snr=target_snr,
        method=methods[method_code],
        version=version,
    )
    fourier = case is Case.FOURIER
    entry_dtype = _COMPLEX_ENTRY if fourier else _REAL_ENTRY
    offset = _HEADER_SIZE
    records = []
    for q in range(num_blocks):
        if offset + 4 > len(data):
            raise StreamFormatError(f"truncated record count for block {q}", offset)
        (count,) = struct.unpack_from("<I", data, offset)
        offset += 4
        if offset + count * entry_dtype.itemsize > len(data):
            raise StreamFormatError(f"truncated record for block {q}", offset)
        entries = np.frombuffer(data, dtype=entry_dtype, count=count, offset=offset)
        indices = entries["index"]
        if count:
            if indices[0] < 1 or int(indices.max()) > num_atoms:
                raise StreamFormatError(f"atom index out of range in block {q}", offset)
            if count > 1 and not np.all(np.diff(indices.astype(np.int64)) > 0):
                raise StreamFormatError(
                    f"indices not strictly increasing in block {q}", offset
                )
        if fourier:
            coefficients = entries["re"] + 1j * entries["im"]
        else:
            coefficients = entries["value"].copy()
        records.append(BlockRecord(indices.copy(), coefficients))
        offset += count * entry_dtype.itemsize
    if offset != len(data):
        raise StreamFormatError("trailing bytes after the final record", offset)
    return EncodedStream(header, records)


def write_stream(stream: EncodedStream, path) -> None:
    with open(path, "wb") as handle:
        handle.write(serialize_stream(stream))


def read_stream(path) -> EncodedStream:
    with open(path, "rb") as handle:
        return parse_stream(handle.read())


def stream_to_json(stream: EncodedStream) -> str:
    """Canonical text rendering of a stream, for diffing and debugging."""
    header = stream.header
    fourier = header.case is Case.FOURIER
    payload = {
        "format": MAGIC.decode(),
        "version": header.version,
        "case": header.case.value,
        "num_atoms": header.num_atoms,
        "block_len": header.block_len,
        "num_blocks": header.num_blocks,
        "pad_len": header.pad_len,
        "sample_rate": header.sample_rate,
        "target_snr": header.target_snr,
        "method": header.method,
        "blocks": [
            {
                "count": len(record),
                "indices": [int(i) for i in record.indices],
                "coefficients": [
                    [complex(c).real, complex(c).imag] if fourier else float(c)
                    for c in record.coefficients
                ],
            }
            for record in stream.records
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True)
