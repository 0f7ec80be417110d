"""Dataset persistence: PNG images, transcriptions, versioned manifests.

Every dataset directory carries a `manifest.json` (format 1) holding the
resolved config, the recipe needed to regenerate the data, and a sha256
checksum per emitted file. Manifests contain no timestamps and are written
with sorted keys, so identical runs produce identical bytes.
"""

from __future__ import annotations

import hashlib
import io
import json
from pathlib import Path

import numpy as np
from PIL import Image

from .compose import LineSample
from .errors import DataError

MANIFEST_FORMAT = 1


def to_jsonable(obj):
    """Recursively convert numpy scalars, arrays, tuples and paths to JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def encode_png(img: np.ndarray) -> bytes:
    """Deterministic 8-bit grayscale PNG encoding of a [0, 1] image."""
    u8 = np.clip(np.round(np.asarray(img, dtype=np.float64) * 255.0), 0, 255)
    buf = io.BytesIO()
    Image.fromarray(u8.astype(np.uint8), mode="L").save(buf, format="PNG")
    return buf.getvalue()


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def file_sha256(path: str | Path) -> str:
    return sha256_hex(Path(path).read_bytes())


def write_manifest(out_dir: str | Path, manifest: dict) -> None:
    text = json.dumps(to_jsonable(manifest), indent=2, sort_keys=True) + "\n"
    (Path(out_dir) / "manifest.json").write_text(text, encoding="utf-8")


def load_manifest(path: str | Path) -> dict:
    """Read a manifest.json, checking the format version."""
    path = Path(path)
    if path.is_dir():
        path = path / "manifest.json"
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid JSON in manifest {path}: {exc}") from exc
    if data.get("format") != MANIFEST_FORMAT:
        raise DataError(
            f"manifest {path} has format {data.get('format')!r}, "
            f"expected {MANIFEST_FORMAT}")
    return data


def save_dataset(out_dir: str | Path, lines: list[LineSample], recipe: dict,
                 config_snapshot: dict | None = None,
                 summary: dict | None = None) -> dict:
    """Write line PNGs, transcriptions.txt and manifest.json; return the manifest."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = []
    for i, line in enumerate(lines):
        name = f"line_{i:04d}.png"
        data = encode_png(line.image)
        (out_dir / name).write_bytes(data)
        records.append({
            "file": name,
            "sha256": sha256_hex(data),
            "transcription": list(line.transcription),
            "boxes": [list(map(int, b)) for b in line.boxes],
            "sources": list(line.sources),
            "provenance": to_jsonable(line.provenance),
        })
    trans = "\n".join(" ".join(line.transcription) for line in lines) + "\n"
    trans_bytes = trans.encode("utf-8")
    (out_dir / "transcriptions.txt").write_bytes(trans_bytes)
    manifest = {
        "format": MANIFEST_FORMAT,
        "recipe": to_jsonable(recipe),
        "config": config_snapshot,
        "summary": to_jsonable(summary) if summary is not None else None,
        "transcriptions": {"file": "transcriptions.txt",
                           "sha256": sha256_hex(trans_bytes)},
        "lines": records,
    }
    write_manifest(out_dir, manifest)
    return manifest


def save_images(out_dir: str | Path, images: list[np.ndarray], recipe: dict,
                config_snapshot: dict | None = None,
                prefix: str = "img") -> dict:
    """Write a flat set of PNGs plus manifest.json; return the manifest."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = []
    for i, img in enumerate(images):
        name = f"{prefix}_{i:03d}.png"
        data = encode_png(img)
        (out_dir / name).write_bytes(data)
        records.append({"file": name, "sha256": sha256_hex(data)})
    manifest = {
        "format": MANIFEST_FORMAT,
        "recipe": to_jsonable(recipe),
        "config": config_snapshot,
        "images": records,
    }
    write_manifest(out_dir, manifest)
    return manifest


def file_records(manifest: dict):
    """Yield (name, sha256) for every file a manifest tracks."""
    for key in ("lines", "images", "files"):
        for rec in manifest.get(key, []) or []:
            yield rec["file"], rec["sha256"]
    trans = manifest.get("transcriptions")
    if trans:
        yield trans["file"], trans["sha256"]


def verify_dataset(out_dir: str | Path) -> list[str]:
    """Check every manifest-listed file; return mismatch descriptions."""
    out_dir = Path(out_dir)
    manifest = load_manifest(out_dir)
    problems = []
    for name, expected in file_records(manifest):
        path = out_dir / name
        if not path.exists():
            problems.append(f"missing file: {name}")
        elif file_sha256(path) != expected:
            problems.append(f"checksum mismatch: {name}")
    return problems


def read_transcriptions(path: str | Path) -> list[list[str]]:
    """Read one space-separated label sequence per line."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read transcriptions {path}: {exc}") from exc
    return [line.split() for line in text.splitlines()]
