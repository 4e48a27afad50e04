"""Corpus ingestion: documents in, chunked snippet stores out.

Three chunking modes cover the supported source layouts:

- ``passthrough``: one snippet per document (abstract-style records).
- ``recursive``: character-budgeted splitting of flat text, preferring the
  coarsest separator available (blank line, then newline, then sentence
  boundary, then whitespace, then a hard cut).
- ``hierarchical``: one snippet per paragraph of a section tree, with the
  heading path spliced into the snippet title.

Stores persist as a directory holding ``snippets.jsonl`` plus
``manifest.json`` and are byte-deterministic for identical inputs.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IngestError

CHUNKING_MODES = ("passthrough", "recursive", "hierarchical")
DEFAULT_MAX_CHARS = 1000
TITLE_PATH_SEPARATOR = " -- "

# Split preference, coarsest first. Sentence boundaries split on the
# whitespace after terminal punctuation so chunks keep their punctuation.
_SEPARATORS = (
    re.compile(r"\n{2,}"),
    re.compile(r"\n"),
    re.compile(r"(?<=[.!?])\s+"),
    re.compile(r"\s+"),
)


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Section:
    heading: str
    paragraphs: tuple[str, ...] = ()
    children: tuple["Section", ...] = ()


@dataclass(frozen=True)
class Document:
    """One raw input record; body is flat text or a section tree."""

    doc_id: str
    source: str
    title: str
    body: str | tuple[Section, ...]

    @property
    def is_hierarchical(self) -> bool:
        return not isinstance(self.body, str)


@dataclass(frozen=True)
class Snippet:
    """Atomic retrieval unit, id namespaced as ``<source>:<doc_id>:<seq>``."""

    snippet_id: str
    source: str
    title: str
    content: str

    @property
    def char_len(self) -> int:
        return len(self.content)

    def to_record(self) -> dict:
        return {
            "id": self.snippet_id,
            "source": self.source,
            "title": self.title,
            "content": self.content,
        }


@dataclass
class SnippetStore:
    """Append-ordered snippet collection with per-source counts."""

    corpus_name: str
    snippets: list[Snippet] = field(default_factory=list)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for snip in self.snippets:
            if snip.snippet_id in seen:
                raise IngestError(f"duplicate snippet id {snip.snippet_id!r}")
            if not snip.content:
                raise IngestError(f"empty content for snippet {snip.snippet_id!r}")
            seen.add(snip.snippet_id)

    def __len__(self) -> int:
        return len(self.snippets)

    @property
    def manifest(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for snip in self.snippets:
            counts[snip.source] = counts.get(snip.source, 0) + 1
        return dict(sorted(counts.items()))

    def ids(self) -> list[str]:
        return [s.snippet_id for s in self.snippets]

    def get(self, snippet_id: str) -> Snippet:
        try:
            return self._by_id[snippet_id]
        except AttributeError:
            self._by_id = {s.snippet_id: s for s in self.snippets}
            return self._by_id[snippet_id]

    # -- persistence --------------------------------------------------------

    def save(self, out_dir: str | Path) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "snippets.jsonl", "w", encoding="utf-8") as fh:
            for snip in self.snippets:
                fh.write(json.dumps(snip.to_record(), ensure_ascii=False))
                fh.write("\n")
        manifest = {
            "corpus_name": self.corpus_name,
            "total": len(self.snippets),
            "sources": self.manifest,
        }
        with open(out / "manifest.json", "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, ensure_ascii=False, indent=2, sort_keys=True)
            fh.write("\n")
        return out

    @classmethod
    def load(cls, store_dir: str | Path) -> "SnippetStore":
        store_dir = Path(store_dir)
        manifest_path = store_dir / "manifest.json"
        if not manifest_path.exists():
            raise IngestError(f"no snippet store at {store_dir}")
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = json.load(fh)
        snippets = []
        with open(store_dir / "snippets.jsonl", encoding="utf-8") as fh:
            for line in fh:
                rec = json.loads(line)
                snippets.append(
                    Snippet(rec["id"], rec["source"], rec["title"], rec["content"])
                )
        store = cls(corpus_name=manifest["corpus_name"], snippets=snippets)
        if len(store) != manifest["total"]:
            raise IngestError(
                f"manifest total {manifest['total']} != {len(store)} snippets on disk"
            )
        return store


# ---------------------------------------------------------------------------
# Recursive character chunking
# ---------------------------------------------------------------------------


def chunk_recursive(text: str, max_chars: int) -> list[str]:
    """Split `text` into chunks of at most `max_chars` characters.

    Chunks never contain a split separator at their boundary, so joining
    the chunks back over the consumed separators reconstructs the input
    exactly (see :func:`chunk_recursive_parts`).
    """
    return [piece for kind, piece in chunk_recursive_parts(text, max_chars) if kind == "chunk"]


def chunk_recursive_parts(text: str, max_chars: int) -> list[tuple[str, str]]:
    """Full partition of `text` into ("chunk"|"sep", piece) tokens, in order.

    Concatenating every piece reproduces the input byte-for-byte; the
    "chunk" pieces are exactly what :func:`chunk_recursive` returns.
    """
    if max_chars < 1:
        raise ValueError(f"max_chars must be >= 1, got {max_chars}")
    if not text:
        return []
    return _split(text, max_chars, 0)


def _split_keeping_seps(text: str, pattern: re.Pattern) -> list[tuple[str, str]]:
    """[(segment, following_separator)] covering `text`; last separator ''."""
    parts = []
    pos = 0
    for match in pattern.finditer(text):
        parts.append((text[pos : match.start()], match.group(0)))
        pos = match.end()
    parts.append((text[pos:], ""))
    return parts


def _split(text: str, max_chars: int, level: int) -> list[tuple[str, str]]:
    if not text:
        return []
    if len(text) <= max_chars:
        return [("chunk", text)]
    if level >= len(_SEPARATORS):
        return [
            ("chunk", text[i : i + max_chars]) for i in range(0, len(text), max_chars)
        ]

    parts = _split_keeping_seps(text, _SEPARATORS[level])
    tokens: list[tuple[str, str]] = []
    cur = ""
    pending_sep = ""

    for seg, sep in parts:
        if len(seg) > max_chars:
            if cur:
                tokens.append(("chunk", cur))
                cur = ""
            if pending_sep:
                tokens.append(("sep", pending_sep))
            tokens.extend(_split(seg, max_chars, level + 1))
            pending_sep = sep
            continue
        if not cur:
            if pending_sep:
                tokens.append(("sep", pending_sep))
            cur = seg
            pending_sep = sep
            continue
        joined = cur + pending_sep + seg
        if len(joined) <= max_chars:
            cur = joined
        else:
            tokens.append(("chunk", cur))
            if pending_sep:
                tokens.append(("sep", pending_sep))
            cur = seg
        pending_sep = sep

    if cur:
        tokens.append(("chunk", cur))
    if pending_sep:
        tokens.append(("sep", pending_sep))
    return tokens


# ---------------------------------------------------------------------------
# Hierarchical chunking
# ---------------------------------------------------------------------------


def chunk_hierarchical(doc: Document) -> list[Snippet]:
    """One snippet per paragraph; titles carry the heading path.

    Sections are walked depth-first with a section's own paragraphs
    emitted before its children, preserving document order.
    """
    if not doc.is_hierarchical:
        raise IngestError(f"document {doc.doc_id!r} has no section tree")
    snippets: list[Snippet] = []

    def walk(section: Section, path: tuple[str, ...]) -> None:
        here = path + (section.heading,) if section.heading else path
        title = TITLE_PATH_SEPARATOR.join((doc.title,) + here)
        for para in section.paragraphs:
            if not para:
                continue
            seq = len(snippets)
            snippets.append(
                Snippet(
                    snippet_id=f"{doc.source}:{doc.doc_id}:{seq}",
                    source=doc.source,
                    title=title,
                    content=para,
                )
            )
        for child in section.children:
            walk(child, here)

    for top in doc.body:
        walk(top, ())
    return snippets


def snippets_for_document(
    doc: Document, chunking: str, max_chars: int = DEFAULT_MAX_CHARS
) -> list[Snippet]:
    """Apply one chunking mode to a document, assigning sequential ids."""
    if chunking == "hierarchical":
        return chunk_hierarchical(doc)
    if doc.is_hierarchical:
        raise IngestError(
            f"document {doc.doc_id!r} has sections; use hierarchical chunking"
        )
    body = doc.body
    if chunking == "passthrough":
        contents = [body]
    elif chunking == "recursive":
        contents = chunk_recursive(body, max_chars)
    else:
        raise IngestError(f"unknown chunking mode {chunking!r}")
    return [
        Snippet(
            snippet_id=f"{doc.source}:{doc.doc_id}:{seq}",
            source=doc.source,
            title=doc.title,
            content=content,
        )
        for seq, content in enumerate(contents)
    ]


# ---------------------------------------------------------------------------
# Ingest and merge
# ---------------------------------------------------------------------------


def _parse_section(obj: dict, where: str) -> Section:
    if not isinstance(obj, dict) or "heading" not in obj:
        raise IngestError(f"{where}: section must be an object with a heading")
    paragraphs = obj.get("paragraphs", [])
    children = obj.get("children", [])
    if not isinstance(paragraphs, list) or not all(isinstance(p, str) for p in paragraphs):
        raise IngestError(f"{where}: section paragraphs must be a list of strings")
    return Section(
        heading=str(obj["heading"]),
        paragraphs=tuple(paragraphs),
        children=tuple(_parse_section(c, where) for c in children),
    )


def parse_document_line(line: str, source: str, where: str) -> Document:
    """Parse one JSONL document record; `where` names the file and line."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise IngestError(f"{where}: invalid JSON ({exc.msg})") from exc
    if not isinstance(obj, dict):
        raise IngestError(f"{where}: document record must be an object")
    doc_id = obj.get("id")
    if not doc_id or not isinstance(doc_id, str):
        raise IngestError(f"{where}: missing or non-string 'id'")
    title = obj.get("title", "")
    if "sections" in obj:
        sections = obj["sections"]
        if not isinstance(sections, list) or not sections:
            raise IngestError(f"{where}: 'sections' must be a non-empty list")
        body: str | tuple[Section, ...] = tuple(
            _parse_section(s, where) for s in sections
        )
    else:
        content = obj.get("content")
        if not isinstance(content, str) or not content:
            raise IngestError(f"{where}: missing or empty 'content'")
        body = content
    return Document(doc_id=doc_id, source=source, title=str(title), body=body)


def _input_files(input_path: str | Path) -> list[Path]:
    path = Path(input_path)
    if path.is_file():
        return [path]
    if path.is_dir():
        files = sorted(path.glob("*.jsonl"))
        if not files:
            raise IngestError(f"no .jsonl files under {path}")
        return files
    raise IngestError(f"corpus path not found: {path}")


def ingest_corpus(
    input_path: str | Path,
    source: str,
    chunking: str,
    max_chars: int = DEFAULT_MAX_CHARS,
) -> SnippetStore:
    """Read JSONL documents and build a snippet store for one source.

    A directory input ingests every ``*.jsonl`` file in sorted name order,
    so the resulting store is deterministic for identical input bytes.
    """
    if chunking not in CHUNKING_MODES:
        raise IngestError(f"unknown chunking mode {chunking!r}")
    snippets: list[Snippet] = []
    seen_docs: set[str] = set()
    for file in _input_files(input_path):
        with open(file, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                where = f"{file}:{lineno}"
                doc = parse_document_line(line, source, where)
                if doc.doc_id in seen_docs:
                    raise IngestError(f"{where}: duplicate doc id {doc.doc_id!r}")
                seen_docs.add(doc.doc_id)
                snippets.extend(snippets_for_document(doc, chunking, max_chars))
    return SnippetStore(corpus_name=source, snippets=snippets)


def merge_stores(stores: list[SnippetStore], merged_name: str) -> SnippetStore:
    """Combine stores into one corpus, ordered by (source, ingestion order)."""
    if not stores:
        raise IngestError("merge_stores needs at least one store")
    combined: list[Snippet] = []
    for store in stores:
        combined.extend(store.snippets)
    combined.sort(key=lambda s: s.source)  # stable: keeps ingestion order per source
    return SnippetStore(corpus_name=merged_name, snippets=combined)
