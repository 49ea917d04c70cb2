"""Deterministic on-disk formats: manifest, shard files, byte/symbol mapping.

A directory holds one shard file per node (node_<e>_<g>.shard) plus
manifest.json.  Each shard concatenates the node's alpha symbols per stripe
across all stripes, every symbol a fixed-width little-endian unsigned integer
whose width is derived from the field modulus.  Bytes map to symbols one to
one (identity embedding), which requires p >= 257; the payload is zero-padded
to whole stripes and the original length plus a checksum live in the manifest.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .codec import Codec
from .construction import build_constants
from .errors import RepairRefusedError, ShardFormatError, SymbolMappingError
from .field import FieldCtx
from .params import CodeParams
from .repair import RepairJob, RepairTranscript, helper_message, repair_node

FORMAT_VERSION = 1
MANIFEST_NAME = "manifest.json"


def shard_name(e: int, g: int) -> str:
    return f"node_{e}_{g}.shard"


def symbol_width_bytes(p: int) -> int:
    """Bytes per stored symbol: smallest width that fits p - 1."""
    return ((p - 1).bit_length() + 7) // 8


@dataclass(frozen=True)
class Manifest:
    """Self-describing stripe-directory metadata; everything a reader needs."""

    format_version: int
    n_bar: int
    u: int
    u0: int
    k_bar: int
    d_bar: int
    p: int
    primitive_root: int
    unity_root: int
    extra_points: tuple[int, ...]
    symbol_width_bytes: int
    original_file_length_bytes: int
    stripe_count: int
    checksum_sha256: str

    @property
    def params(self) -> CodeParams:
        return CodeParams(n_bar=self.n_bar, u=self.u, u0=self.u0,
                          k_bar=self.k_bar, d_bar=self.d_bar)

    def to_json(self) -> str:
        payload = asdict(self)
        payload["extra_points"] = list(self.extra_points)
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Manifest":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ShardFormatError(f"manifest is not valid JSON: {exc}") from exc
        try:
            payload["extra_points"] = tuple(payload["extra_points"])
            manifest = cls(**payload)
        except (KeyError, TypeError) as exc:
            raise ShardFormatError(f"manifest misses required fields: {exc}") from exc
        manifest.validate()
        return manifest

    def validate(self) -> None:
        if self.format_version != FORMAT_VERSION:
            raise ShardFormatError(
                f"unsupported format_version {self.format_version}")
        params = self.params  # raises ParameterError on bad parameters
        field = FieldCtx.create(self.p, self.u)
        if field.primitive_root != self.primitive_root:
            raise ShardFormatError(
                f"manifest primitive_root {self.primitive_root} does not match "
                f"the canonical value {field.primitive_root} for p={self.p}")
        if field.unity_root != self.unity_root:
            raise ShardFormatError(
                f"manifest unity_root {self.unity_root} does not match "
                f"the canonical value {field.unity_root}")
        if build_constants(params, field).extra_points != self.extra_points:
            raise ShardFormatError("manifest extra_points are not canonical")
        if self.symbol_width_bytes != symbol_width_bytes(self.p):
            raise ShardFormatError(
                f"symbol width {self.symbol_width_bytes} wrong for p={self.p}")
        if self.original_file_length_bytes < 0 or self.stripe_count < 0:
            raise ShardFormatError("negative length or stripe count")


def _checksum(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def _symbol_dtype(width: int) -> np.dtype:
    if width == 1:
        return np.dtype("<u1")
    if width == 2:
        return np.dtype("<u2")
    raise ShardFormatError(f"unsupported symbol width {width}")


def bytes_to_symbols(payload: bytes, codec: Codec) -> np.ndarray:
    """Payload bytes as data vectors of shape (k, alpha, stripe_count).

    One byte maps to one field element, so p must be at least 257; the
    payload is zero-padded up to a whole number of stripes.
    """
    params = codec.params
    if codec.p < 257:
        raise SymbolMappingError(
            f"p={codec.p} cannot embed bytes; raise --min-field to 257 or more")
    per_stripe = params.k * params.alpha
    stripes = (len(payload) + per_stripe - 1) // per_stripe
    data = np.zeros(stripes * per_stripe, dtype=np.int64)
    data[:len(payload)] = np.frombuffer(payload, dtype=np.uint8)
    return data.reshape(stripes, params.k, params.alpha).transpose(1, 2, 0)


def symbols_to_bytes(data: np.ndarray, length: int) -> bytes:
    """Inverse of bytes_to_symbols, truncating the padding."""
    flat = np.ascontiguousarray(data.transpose(2, 0, 1)).reshape(-1)
    if flat.size < length:
        raise ShardFormatError(
            f"{flat.size} symbols cannot cover {length} payload bytes")
    if np.any(flat >= 256):
        raise ShardFormatError("symbol outside byte range; not a byte payload")
    return flat.astype(np.uint8).tobytes()[:length]


def write_shards(directory, manifest: Manifest, vectors: np.ndarray) -> None:
    """Write manifest.json plus one shard per node; vectors (n, alpha, stripes)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    params = manifest.params
    dtype = _symbol_dtype(manifest.symbol_width_bytes)
    for i, (e, g) in enumerate(params.nodes()):
        per_node = np.ascontiguousarray(vectors[i].T).astype(dtype)
        (directory / shard_name(e, g)).write_bytes(per_node.tobytes())
    (directory / MANIFEST_NAME).write_text(manifest.to_json(), encoding="utf-8")


def write_one_shard(directory, manifest: Manifest, e: int, g: int,
                    node_vector: np.ndarray) -> Path:
    """(Re)write a single node's shard; node_vector (alpha, stripes)."""
    directory = Path(directory)
    dtype = _symbol_dtype(manifest.symbol_width_bytes)
    path = directory / shard_name(e, g)
    path.write_bytes(np.ascontiguousarray(node_vector.T).astype(dtype).tobytes())
    return path


def read_manifest(directory) -> Manifest:
    path = Path(directory) / MANIFEST_NAME
    if not path.exists():
        raise ShardFormatError(f"no {MANIFEST_NAME} in {directory}")
    return Manifest.from_json(path.read_text(encoding="utf-8"))


def read_shards(directory) -> tuple[Manifest, np.ndarray, np.ndarray]:
    """Load a stripe directory.

    Returns (manifest, vectors (n, alpha, stripes), present (n,)); missing
    shard files come back zeroed with their present flag cleared, corrupt
    ones raise ShardFormatError naming the file and offset.
    """
    directory = Path(directory)
    manifest = read_manifest(directory)
    params = manifest.params
    width = manifest.symbol_width_bytes
    dtype = _symbol_dtype(width)
    expected = manifest.stripe_count * params.alpha * width
    vectors = np.zeros((params.n, params.alpha, manifest.stripe_count),
                       dtype=np.int64)
    present = np.zeros(params.n, dtype=bool)
    for i, (e, g) in enumerate(params.nodes()):
        path = directory / shard_name(e, g)
        if not path.exists():
            continue
        blob = path.read_bytes()
        if len(blob) != expected:
            raise ShardFormatError(
                f"{path.name}: {len(blob)} bytes, expected {expected}")
        values = np.frombuffer(blob, dtype=dtype).astype(np.int64)
        bad = np.nonzero(values >= manifest.p)[0]
        if bad.size:
            raise ShardFormatError(
                f"{path.name}: symbol {int(values[bad[0]])} >= p={manifest.p} "
                f"at offset {int(bad[0]) * width}")
        vectors[i] = values.reshape(manifest.stripe_count, params.alpha).T
        present[i] = True
    return manifest, vectors, present


def codec_for_manifest(manifest: Manifest) -> Codec:
    return Codec(manifest.params, FieldCtx.create(manifest.p, manifest.u))


def encode_file(input_path, out_dir, params: CodeParams,
                min_field: int = 257) -> Manifest:
    """Stripe a file into a shard directory."""
    payload = Path(input_path).read_bytes()
    codec = Codec(params, min_field=min_field)
    data = bytes_to_symbols(payload, codec)
    stripes = data.shape[2]
    vectors = (codec.encode_batch(data) if stripes
               else np.zeros((params.n, params.alpha, 0), dtype=np.int64))
    manifest = Manifest(
        format_version=FORMAT_VERSION,
        n_bar=params.n_bar, u=params.u, u0=params.u0,
        k_bar=params.k_bar, d_bar=params.d_bar,
        p=codec.p,
        primitive_root=codec.field.primitive_root,
        unity_root=codec.field.unity_root,
        extra_points=codec.constants.extra_points,
        symbol_width_bytes=symbol_width_bytes(codec.p),
        original_file_length_bytes=len(payload),
        stripe_count=stripes,
        checksum_sha256=_checksum(payload),
    )
    write_shards(out_dir, manifest, vectors)
    return manifest


def decode_file(in_dir, output_path) -> tuple[Manifest, int, list[tuple[int, int]]]:
    """Rebuild the original file from a shard directory (up to r shards may
    be missing); verifies the manifest checksum.

    Returns (manifest, payload length, nodes whose shards were missing).
    """
    manifest, vectors, present = read_shards(in_dir)
    params = manifest.params
    codec = codec_for_manifest(manifest)
    restored = codec.decode_batch(vectors, present) if manifest.stripe_count \
        else vectors
    payload = symbols_to_bytes(restored[:params.k],
                               manifest.original_file_length_bytes)
    if _checksum(payload) != manifest.checksum_sha256:
        raise ShardFormatError("decoded payload fails the manifest checksum")
    Path(output_path).write_bytes(payload)
    missing = [params.node_pair(i) for i in range(params.n) if not present[i]]
    return manifest, len(payload), missing


def repair_shard(in_dir, e: int, g: int, helpers=None,
                 force: bool = False) -> tuple[Manifest, RepairTranscript, Path]:
    """Regenerate one shard file through the repair protocol.

    Refused unless the target shard is the only missing one (force overrides
    a still-present target, never other missing shards).
    """
    manifest, vectors, present = read_shards(in_dir)
    params = manifest.params
    codec = codec_for_manifest(manifest)
    target = params.node_index(e, g)
    if present[target] and not force:
        raise RepairRefusedError(
            f"shard {shard_name(e, g)} is present; pass force to rewrite it")
    missing_others = [params.node_pair(i) for i in range(params.n)
                      if not present[i] and i != target]
    if missing_others:
        raise RepairRefusedError(
            f"other shards missing {missing_others}; repair serves exactly "
            f"one failed node, run decode instead")
    job = RepairJob.create(params, e, g, helpers)
    u = params.u
    messages = {
        h: helper_message(codec, vectors[h * u:(h + 1) * u], h, job)
        for h in job.helpers}
    survivors = {gg: vectors[params.node_index(e, gg)]
                 for gg in range(u) if gg != g}
    transcript = repair_node(codec, job, messages, survivors)
    path = write_one_shard(in_dir, manifest, e, g, transcript.recovered)
    return manifest, transcript, path
