"""Minimal PDF reader: page-ordered text extraction on the standard library.

Supports the common subset of ISO 32000 needed for machine-written papers:
classic xref tables and xref/object streams (located by scanning, not by
offset tables, which also tolerates mildly damaged files), FlateDecode,
literal and hex strings, and the text-showing operators Tj / TJ / ' / ".
Pages whose content cannot be decoded (e.g. image-only pages or exotic
filters) yield empty strings rather than errors.
"""

from __future__ import annotations

import re
import zlib
from typing import Any, NamedTuple

from .errors import EncryptedPdf, MalformedPdf

_WHITESPACE = b"\x00\t\n\x0c\r "
_DELIMITERS = b"()<>[]{}/%"


class Ref(NamedTuple):
    num: int
    gen: int


class Name(str):
    """A PDF name token, e.g. /Type."""


class Stream:
    def __init__(self, attrs: dict, raw: bytes):
        self.attrs = attrs
        self.raw = raw


def _is_regular(ch: int) -> bool:
    return ch not in _WHITESPACE and ch not in _DELIMITERS


def _skip_ws(data: bytes, pos: int) -> int:
    n = len(data)
    while pos < n:
        ch = data[pos]
        if ch in _WHITESPACE:
            pos += 1
        elif ch == 0x25:  # '%' comment runs to end of line
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    return pos


def _parse_literal_string(data: bytes, pos: int) -> tuple[bytes, int]:
    # pos is just past the opening '('
    out = bytearray()
    depth = 1
    n = len(data)
    while pos < n:
        ch = data[pos]
        if ch == 0x5C:  # backslash
            pos += 1
            if pos >= n:
                break
            esc = data[pos]
            mapping = {0x6E: 0x0A, 0x72: 0x0D, 0x74: 0x09, 0x62: 0x08, 0x66: 0x0C}
            if esc in mapping:
                out.append(mapping[esc])
                pos += 1
            elif esc in b"()\\":
                out.append(esc)
                pos += 1
            elif 0x30 <= esc <= 0x37:  # octal, up to 3 digits
                oct_digits = bytearray()
                while pos < n and len(oct_digits) < 3 and 0x30 <= data[pos] <= 0x37:
                    oct_digits.append(data[pos])
                    pos += 1
                out.append(int(oct_digits, 8) & 0xFF)
            elif esc in b"\r\n":  # line continuation
                pos += 1
                if esc == 0x0D and pos < n and data[pos] == 0x0A:
                    pos += 1
            else:
                out.append(esc)
                pos += 1
        elif ch == 0x28:  # '('
            depth += 1
            out.append(ch)
            pos += 1
        elif ch == 0x29:  # ')'
            depth -= 1
            if depth == 0:
                return bytes(out), pos + 1
            out.append(ch)
            pos += 1
        else:
            out.append(ch)
            pos += 1
    raise MalformedPdf("unterminated literal string")


def _parse_hex_string(data: bytes, pos: int) -> tuple[bytes, int]:
    end = data.find(b">", pos)
    if end < 0:
        raise MalformedPdf("unterminated hex string")
    digits = re.sub(rb"[^0-9A-Fa-f]", b"", data[pos:end])
    if len(digits) % 2:
        digits += b"0"
    return bytes.fromhex(digits.decode("ascii")), end + 1


_NUM_RE = re.compile(rb"[+-]?(?:\d+\.?\d*|\.\d+)")


def parse_value(data: bytes, pos: int) -> tuple[Any, int]:
    """Parse one PDF object starting at pos; returns (value, next_pos)."""
    pos = _skip_ws(data, pos)
    if pos >= len(data):
        raise MalformedPdf("unexpected end of data")
    ch = data[pos]
    if data.startswith(b"<<", pos):
        return _parse_dict(data, pos + 2)
    if ch == 0x3C:  # '<'
        return _parse_hex_string(data, pos + 1)
    if ch == 0x28:  # '('
        return _parse_literal_string(data, pos + 1)
    if ch == 0x2F:  # '/'
        pos += 1
        start = pos
        while pos < len(data) and _is_regular(data[pos]):
            pos += 1
        raw = data[start:pos]
        # #xx escapes inside names
        raw = re.sub(rb"#([0-9A-Fa-f]{2})", lambda m: bytes([int(m.group(1), 16)]), raw)
        return Name(raw.decode("latin-1")), pos
    if ch == 0x5B:  # '['
        items = []
        pos += 1
        while True:
            pos = _skip_ws(data, pos)
            if pos < len(data) and data[pos] == 0x5D:
                return items, pos + 1
            value, pos = parse_value(data, pos)
            items.append(value)
    if data.startswith(b"true", pos):
        return True, pos + 4
    if data.startswith(b"false", pos):
        return False, pos + 5
    if data.startswith(b"null", pos):
        return None, pos + 4
    m = _NUM_RE.match(data, pos)
    if m:
        text = m.group(0)
        # look ahead for "<gen> R" to form an indirect reference
        if b"." not in text and not text.startswith(b"-"):
            ref_m = re.match(rb"\s+(\d+)\s+R(?![A-Za-z0-9])", data[m.end():m.end() + 32])
            if ref_m:
                return Ref(int(text), int(ref_m.group(1))), m.end() + ref_m.end()
        return (float(text) if b"." in text else int(text)), m.end()
    raise MalformedPdf(f"unparseable token at offset {pos}")


def _parse_dict(data: bytes, pos: int) -> tuple[dict, int]:
    out: dict = {}
    while True:
        pos = _skip_ws(data, pos)
        if data.startswith(b">>", pos):
            return out, pos + 2
        if pos >= len(data) or data[pos] != 0x2F:
            raise MalformedPdf("dictionary key is not a name")
        key, pos = parse_value(data, pos)
        value, pos = parse_value(data, pos)
        out[str(key)] = value


_OBJ_RE = re.compile(rb"(\d+)\s+(\d+)\s+obj\b")


class PdfDocument:
    """Parsed object table plus page-tree navigation."""

    def __init__(self, data: bytes):
        if not data.lstrip(b"\x00").startswith(b"%PDF-"):
            raise MalformedPdf("missing %PDF header")
        self._data = data
        self._objects: dict[int, Any] = {}
        self._scan_objects()
        if not self._objects:
            raise MalformedPdf("no objects found")
        self._check_encryption()

    # -- object table ------------------------------------------------------

    def _scan_objects(self) -> None:
        data = self._data
        for m in _OBJ_RE.finditer(data):
            num = int(m.group(1))
            try:
                value, pos = parse_value(data, m.end())
            except MalformedPdf:
                continue
            pos = _skip_ws(data, pos)
            if isinstance(value, dict) and data.startswith(b"stream", pos):
                pos += len(b"stream")
                if data.startswith(b"\r\n", pos):
                    pos += 2
                elif data.startswith(b"\n", pos) or data.startswith(b"\r", pos):
                    pos += 1
                length = value.get("Length")
                if isinstance(length, int):
                    raw = data[pos:pos + length]
                else:
                    end = data.find(b"endstream", pos)
                    raw = data[pos:end if end >= 0 else len(data)].rstrip(b"\r\n")
                value = Stream(value, raw)
            self._objects[num] = value
        # unpack compressed object streams
        for value in list(self._objects.values()):
            if isinstance(value, Stream) and value.attrs.get("Type") == Name("ObjStm"):
                self._unpack_objstm(value)

    def _unpack_objstm(self, stm: Stream) -> None:
        try:
            payload = decode_stream(stm, self.resolve)
        except Exception:
            return
        count = self.resolve(stm.attrs.get("N"))
        first = self.resolve(stm.attrs.get("First"))
        if not isinstance(count, int) or not isinstance(first, int):
            return
        header = payload[:first].split()
        for i in range(count):
            try:
                num = int(header[2 * i])
                offset = int(header[2 * i + 1])
                value, _ = parse_value(payload, first + offset)
            except (IndexError, ValueError, MalformedPdf):
                continue
            self._objects.setdefault(num, value)

    def _check_encryption(self) -> None:
        for m in re.finditer(rb"trailer\b", self._data):
            try:
                trailer, _ = parse_value(self._data, m.end())
            except MalformedPdf:
                continue
            if isinstance(trailer, dict) and "Encrypt" in trailer:
                raise EncryptedPdf("PDF is password-protected")
        for value in self._objects.values():
            if isinstance(value, Stream) and value.attrs.get("Type") == Name("XRef"):
                if "Encrypt" in value.attrs:
                    raise EncryptedPdf("PDF is password-protected")

    def resolve(self, value: Any) -> Any:
        seen = set()
        while isinstance(value, Ref):
            if value.num in seen:
                return None
            seen.add(value.num)
            value = self._objects.get(value.num)
        return value

    # -- page tree ---------------------------------------------------------

    def pages(self) -> list[dict]:
        catalog = None
        for value in self._objects.values():
            attrs = value.attrs if isinstance(value, Stream) else value
            if isinstance(attrs, dict) and attrs.get("Type") == Name("Catalog"):
                catalog = attrs
                break
        if catalog is None:
            raise MalformedPdf("no document catalog")
        root = self.resolve(catalog.get("Pages"))
        if not isinstance(root, dict):
            raise MalformedPdf("catalog has no page tree")
        out: list[dict] = []
        self._walk_pages(root, out, set())
        if not out:
            raise MalformedPdf("page tree is empty")
        return out

    def _walk_pages(self, node: dict, out: list[dict], seen: set[int]) -> None:
        if id(node) in seen:
            return
        seen.add(id(node))
        if node.get("Type") == Name("Page"):
            out.append(node)
            return
        for kid in self.resolve(node.get("Kids")) or []:
            kid = self.resolve(kid)
            if isinstance(kid, dict):
                self._walk_pages(kid, out, seen)

    def page_texts(self) -> list[str]:
        texts = []
        for page in self.pages():
            contents = self.resolve(page.get("Contents"))
            chunks: list[bytes] = []
            refs = contents if isinstance(contents, list) else [contents]
            for item in refs:
                item = self.resolve(item)
                if isinstance(item, Stream):
                    try:
                        chunks.append(decode_stream(item, self.resolve))
                    except Exception:
                        pass
            texts.append(extract_text_operators(b"\n".join(chunks)))
        return texts


def decode_stream(stm: Stream, resolve) -> bytes:
    filters = resolve(stm.attrs.get("Filter"))
    if filters is None:
        return stm.raw
    if not isinstance(filters, list):
        filters = [filters]
    data = stm.raw
    for filt in filters:
        filt = resolve(filt)
        if filt == Name("FlateDecode"):
            data = zlib.decompress(data)
        elif filt == Name("ASCII85Decode"):
            import base64
            body = re.sub(rb"\s", b"", data)
            if body.startswith(b"<~"):
                body = body[2:]
            if body.endswith(b"~>"):
                body = body[:-2]
            data = base64.a85decode(body)
        elif filt in (Name("ASCIIHexDecode"),):
            digits = re.sub(rb"[^0-9A-Fa-f]", b"", data.split(b">")[0])
            if len(digits) % 2:
                digits += b"0"
            data = bytes.fromhex(digits.decode("ascii"))
        else:
            raise MalformedPdf(f"unsupported stream filter {filt}")
    params = resolve(stm.attrs.get("DecodeParms"))
    if isinstance(params, dict) and resolve(params.get("Predictor"), ) not in (None, 1):
        data = _apply_png_predictor(data, resolve, params)
    return data


def _apply_png_predictor(data: bytes, resolve, params: dict) -> bytes:
    columns = resolve(params.get("Columns")) or 1
    colors = resolve(params.get("Colors")) or 1
    bpc = resolve(params.get("BitsPerComponent")) or 8
    row_bytes = (columns * colors * bpc + 7) // 8
    out = bytearray()
    prev = bytearray(row_bytes)
    pos = 0
    while pos + 1 + row_bytes <= len(data):
        tag = data[pos]
        row = bytearray(data[pos + 1:pos + 1 + row_bytes])
        if tag == 2:  # Up predictor (the one xref streams use)
            for i in range(row_bytes):
                row[i] = (row[i] + prev[i]) & 0xFF
        elif tag == 1:
            for i in range(1, row_bytes):
                row[i] = (row[i] + row[i - 1]) & 0xFF
        out.extend(row)
        prev = row
        pos += 1 + row_bytes
    return bytes(out)


def _decode_pdf_string(raw: bytes) -> str:
    if raw.startswith(b"\xfe\xff"):
        return raw[2:].decode("utf-16-be", errors="replace")
    return raw.decode("latin-1", errors="replace")


def extract_text_operators(content: bytes) -> str:
    """Run the text-showing operators of a content stream into plain text."""
    pos = 0
    n = len(content)
    operands: list[Any] = []
    lines: list[str] = [""]

    def newline() -> None:
        if lines[-1]:
            lines.append("")

    while pos < n:
        pos = _skip_ws(content, pos)
        if pos >= n:
            break
        ch = content[pos]
        if ch == 0x28 or ch == 0x3C or ch == 0x2F or ch == 0x5B or (
            0x30 <= ch <= 0x39) or ch in b"+-.":
            try:
                value, pos = parse_value(content, pos)
            except MalformedPdf:
                pos += 1
                continue
            operands.append(value)
            continue
        start = pos
        while pos < n and _is_regular(content[pos]):
            pos += 1
        if pos == start:
            pos += 1
            continue
        op = content[start:pos]
        if op == b"Tj" and operands and isinstance(operands[-1], bytes):
            lines[-1] += _decode_pdf_string(operands[-1])
        elif op == b"TJ" and operands and isinstance(operands[-1], list):
            for item in operands[-1]:
                if isinstance(item, bytes):
                    lines[-1] += _decode_pdf_string(item)
        elif op in (b"'", b'"'):
            newline()
            for item in reversed(operands):
                if isinstance(item, bytes):
                    lines[-1] += _decode_pdf_string(item)
                    break
        elif op in (b"Td", b"TD", b"T*", b"ET"):
            newline()
        operands = []

    text = "\n".join(line.rstrip() for line in lines).strip("\n")
    return text


def extract_page_texts(pdf_bytes: bytes) -> list[str]:
    """Top-level entry: page-ordered text for a PDF byte string."""
    try:
        doc = PdfDocument(pdf_bytes)
        return doc.page_texts()
    except (EncryptedPdf, MalformedPdf):
        raise
    except Exception as exc:  # defensive: any parser crash means malformed input
        raise MalformedPdf(str(exc)) from exc
