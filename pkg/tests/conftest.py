from __future__ import annotations

import io
import json
import socket
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_pdf() -> bytes:
    return (FIXTURES / "sample_paper.pdf").read_bytes()


@pytest.fixture(scope="session")
def fixture_meta() -> dict:
    return json.loads((FIXTURES / "sample_paper.json").read_text())


@pytest.fixture(scope="session")
def fixture_bundle(fixture_pdf):
    from paperwave import ingest

    doc = ingest.extract_text(fixture_pdf, doc_id="sample.pdf")
    return ingest.chunk_bundle([doc], 2000)


def make_pdf(pages: list[str | None]) -> bytes:
    """Build a small PDF with reportlab; None renders an image-only page."""
    from reportlab.lib.pagesizes import LETTER
    from reportlab.pdfgen import canvas

    buf = io.BytesIO()
    c = canvas.Canvas(buf, pagesize=LETTER)
    for page in pages:
        if page is None:
            c.rect(100, 100, 200, 200, fill=1)
        else:
            y = 700
            for line in page.splitlines():
                c.drawString(72, y, line)
                y -= 16
        c.showPage()
    c.save()
    return buf.getvalue()


@pytest.fixture
def no_network(monkeypatch):
    """Any socket connection attempt fails the test."""

    def guard(*args, **kwargs):
        raise AssertionError("network access attempted during offline test")

    monkeypatch.setattr(socket.socket, "connect", guard)
    monkeypatch.setattr(socket, "create_connection", guard)
