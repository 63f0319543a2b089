"""PDF ingestion: text extraction, heading detection, and chunking."""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

from . import pdfparse
from .errors import EmptyInput

DEFAULT_CHUNK_CHARS = 2000

_NUMBERED_HEADING_RE = re.compile(r"^(\d+(\.\d+)*\.?|[IVX]+\.)\s+\S")


@dataclass(frozen=True)
class DocumentText:
    """Extracted text of one PDF, page-ordered, with heading hints."""

    doc_id: str
    pages: tuple[str, ...]
    heading_candidates: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        if not self.pages:
            raise ValueError("pages must be non-empty")
        for page_index, _ in self.heading_candidates:
            if not 0 <= page_index < len(self.pages):
                raise ValueError(f"heading candidate page {page_index} out of range")

    @property
    def text(self) -> str:
        """Pages joined with a single newline; the reference frame for chunk ranges."""
        return "\n".join(self.pages)


@dataclass(frozen=True)
class Chunk:
    chunk_id: str
    doc_id: str
    char_range: tuple[int, int]
    text: str


@dataclass(frozen=True)
class SourceBundle:
    documents: tuple[DocumentText, ...]
    chunks: tuple[Chunk, ...]
    total_chars: int = field(default=0)

    @property
    def heading_lines(self) -> list[str]:
        return [line for doc in self.documents for _, line in doc.heading_candidates]


def extract_text(pdf_bytes: bytes, doc_id: str | None = None) -> DocumentText:
    """Extract page-ordered text from a PDF.

    Image-only pages yield empty strings. Raises MalformedPdf / EncryptedPdf.
    """
    pages = pdfparse.extract_page_texts(pdf_bytes)
    if doc_id is None:
        doc_id = hashlib.sha256(pdf_bytes).hexdigest()[:16]
    headings = tuple(
        (i, line)
        for i, page in enumerate(pages)
        for line in _heading_candidates(page)
    )
    return DocumentText(doc_id=doc_id, pages=tuple(pages), heading_candidates=headings)


def _heading_candidates(page: str) -> list[str]:
    """Short numbered / title-case / all-caps lines that look like section titles."""
    found = []
    for line in page.splitlines():
        stripped = line.strip()
        if not stripped or len(stripped) > 80:
            continue
        words = stripped.split()
        if len(words) > 10:
            continue
        if _NUMBERED_HEADING_RE.match(stripped):
            found.append(stripped)
        elif stripped.isupper() and len(words) <= 8 and any(c.isalpha() for c in stripped):
            found.append(stripped)
        elif (
            len(words) >= 2
            and all(w[0].isupper() for w in words if w[0].isalpha())
            and not stripped.endswith((".", ",", ";", ":"))
        ):
            found.append(stripped)
    return found


def chunk_bundle(
    docs: list[DocumentText], target_chunk_chars: int = DEFAULT_CHUNK_CHARS
) -> SourceBundle:
    """Split documents into retrieval chunks on paragraph boundaries.

    Every chunk is at most 2 x target_chunk_chars; ordering follows document
    order; concatenated chunk text reproduces each document's text exactly.
    """
    if target_chunk_chars < 200:
        raise ValueError("target_chunk_chars must be >= 200")
    if not docs or all(not doc.text.strip() for doc in docs):
        raise EmptyInput("all documents are empty")

    chunks: list[Chunk] = []
    for doc in docs:
        for start, end in _chunk_ranges(doc.text, target_chunk_chars):
            chunks.append(
                Chunk(
                    chunk_id=f"{doc.doc_id}:{len(chunks):04d}",
                    doc_id=doc.doc_id,
                    char_range=(start, end),
                    text=doc.text[start:end],
                )
            )
    total = sum(len(doc.text) for doc in docs)
    return SourceBundle(documents=tuple(docs), chunks=tuple(chunks), total_chars=total)


def _chunk_ranges(text: str, target: int) -> list[tuple[int, int]]:
    """Greedy paragraph packing; hard split only when a paragraph exceeds 2x target."""
    if not text:
        return []
    boundaries = _paragraph_boundaries(text)
    ranges: list[tuple[int, int]] = []
    start = 0
    cursor = 0
    for boundary in boundaries + [len(text)]:
        if boundary - start > target and cursor > start:
            ranges.append((start, cursor))
            start = cursor
        cursor = boundary
        # paragraph alone exceeds the hard cap: split mid-paragraph
        while cursor - start > 2 * target:
            ranges.append((start, start + target))
            start += target
    if start < len(text):
        ranges.append((start, len(text)))
    return ranges


def _paragraph_boundaries(text: str) -> list[int]:
    """Offsets just after each blank-line gap (fallback: after each newline)."""
    gaps = [m.end() for m in re.finditer(r"\n\s*\n", text)]
    if gaps:
        return gaps
    return [m.end() for m in re.finditer(r"\n", text)]
