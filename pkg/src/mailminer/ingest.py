"""Parse .eml files into structured records.

Each message is reduced to six attributes: Date, MessageId, CC, From,
Subject and an HTML presence flag. Header parsing is deliberately small
and forgiving: anything that cannot be interpreted degrades to the
missing marker instead of failing the whole file.
"""

import base64
import binascii
import email.utils
import re
from dataclasses import dataclass
from datetime import timezone
from pathlib import Path

from .core import MISSING, DirectoryUnreadable, MalformedInput

_SEPARATOR = re.compile(r"\r?\n\r?\n")
_ENCODED_WORD = re.compile(r"=\?([^?]+)\?([bBqQ])\?([^? ]*)\?=")

# Only the B and Q encodings over these charsets are decoded; any other
# encoded-word is kept verbatim.
_CHARSETS = {
    "utf-8": "utf-8",
    "utf8": "utf-8",
    "iso-8859-1": "iso-8859-1",
    "iso8859-1": "iso-8859-1",
    "latin-1": "iso-8859-1",
    "latin1": "iso-8859-1",
}


@dataclass(frozen=True)
class RawEmail:
    """One message split into unfolded headers and MIME body parts."""

    source_path: str | None
    headers: tuple  # ((name, value), ...) in order of appearance
    body_parts: tuple  # ((content_type, payload_bytes), ...)

    def get(self, name):
        """First header value with the given name, case-insensitive."""
        low = name.lower()
        for hname, value in self.headers:
            if hname.lower() == low:
                return value
        return None

    def get_all(self, name):
        low = name.lower()
        return [v for hname, v in self.headers if hname.lower() == low]


@dataclass(frozen=True)
class EmailRecord:
    """A message reduced to the six canonical attributes."""

    date: object  # UTC seconds (int) or MISSING
    message_id: object  # str or MISSING
    cc: tuple  # lowercase addr-specs, possibly empty
    from_addr: object  # lowercase addr-spec or MISSING
    subject: object  # decoded str or MISSING
    has_html: bool


@dataclass(frozen=True)
class SkipEntry:
    path: str
    reason: str


@dataclass
class ScanResult:
    records: list
    skipped: list


def _parse_header_block(text):
    """Header lines to (name, value) pairs; folded continuations are
    joined with a single space. Lines with no colon are ignored."""
    headers = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line[:1] in (" ", "\t") and headers:
            name, value = headers[-1]
            headers[-1] = (name, value + " " + line.strip())
        elif ":" in line:
            name, _, value = line.partition(":")
            headers.append((name.strip(), value.strip()))
        # else: stray line (e.g. mbox "From " marker), skip it
    return headers


def _content_type(headers_pairs):
    for name, value in headers_pairs:
        if name.lower() == "content-type":
            return value
    return None


def _main_type(ct_value):
    return ct_value.split(";", 1)[0].strip().lower()


def _boundary(ct_value):
    m = re.search(r'boundary\s*=\s*"([^"]*)"', ct_value, re.IGNORECASE)
    if m:
        return m.group(1)
    m = re.search(r"boundary\s*=\s*([^;\s]+)", ct_value, re.IGNORECASE)
    return m.group(1) if m else None


def _split_body(body_text, ct_value):
    """Body text to a list of (content_type, payload_bytes). Multipart
    bodies are flattened recursively; everything else is one part."""
    ctype = _main_type(ct_value) if ct_value else "text/plain"
    if ct_value and ctype.startswith("multipart/"):
        boundary = _boundary(ct_value)
        if boundary:
            delim = re.compile(
                r"^--" + re.escape(boundary) + r"(--)?[ \t]*\r?$", re.MULTILINE
            )
            pieces = delim.split(body_text)
            # split() interleaves the optional "--" capture group
            segments = [pieces[i] for i in range(2, len(pieces), 2) if pieces[i - 1] is None]
            parts = []
            for segment in segments:
                segment = segment.lstrip("\r\n")
                m = _SEPARATOR.search(segment)
                if m:
                    part_headers = _parse_header_block(segment[: m.start()])
                    part_body = segment[m.end():]
                else:
                    part_headers = _parse_header_block(segment)
                    part_body = ""
                part_ct = _content_type(part_headers)
                if part_ct and _main_type(part_ct).startswith("multipart/"):
                    parts.extend(_split_body(part_body, part_ct))
                else:
                    part_type = _main_type(part_ct) if part_ct else "text/plain"
                    parts.append((part_type, part_body.encode("latin-1")))
            if parts:
                return parts
    return [(ctype, body_text.encode("latin-1"))]


def parse_eml(data, source_path=None):
    """Parse raw .eml bytes into a RawEmail.

    The header block ends at the first blank line; CRLF and LF endings
    are both accepted. Raises MalformedInput when there is neither a
    header/body separator nor a single parseable header line.
    """
    text = data.decode("latin-1")
    m = _SEPARATOR.search(text)
    if m:
        header_text, body_text = text[: m.start()], text[m.end():]
        had_separator = True
    else:
        header_text, body_text = text, ""
        had_separator = False
    headers = _parse_header_block(header_text)
    if not headers and not had_separator:
        raise MalformedInput(
            f"not an email message: no header/body separator and no header line"
            + (f" in {source_path}" if source_path else "")
        )
    ct_value = _content_type(headers)
    parts = _split_body(body_text, ct_value)
    return RawEmail(source_path, tuple(headers), tuple(parts))


def _decode_q(text):
    out = bytearray()
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "_":
            out.append(0x20)
            i += 1
        elif ch == "=":
            if i + 3 > len(text):
                raise ValueError("truncated Q escape")
            out.append(int(text[i + 1 : i + 3], 16))
            i += 3
        else:
            code = ord(ch)
            if code > 255:
                raise ValueError("non-latin character in Q text")
            out.append(code)
            i += 1
    return bytes(out)


def decode_encoded_words(value):
    """Decode RFC 2047 =?charset?B|Q?...?= tokens; undecodable tokens
    are kept verbatim."""

    def repl(m):
        charset = m.group(1).split("*", 1)[0].lower()
        codec = _CHARSETS.get(charset)
        if codec is None:
            return m.group(0)
        try:
            if m.group(2).lower() == "b":
                raw = base64.b64decode(m.group(3), validate=True)
            else:
                raw = _decode_q(m.group(3))
            return raw.decode(codec)
        except (binascii.Error, ValueError, UnicodeDecodeError):
            return m.group(0)

    return _ENCODED_WORD.sub(repl, value)


def _clean_addr(addr):
    addr = addr.strip().lower()
    if addr.count("@") == 1:
        return addr
    return None


def extract_record(raw):
    """Reduce a RawEmail to the six canonical attributes.

    Every malformed field degrades to MISSING; this never raises.
    """
    date = MISSING
    date_header = raw.get("Date")
    if date_header:
        try:
            dt = email.utils.parsedate_to_datetime(date_header)
            if dt is not None:
                if dt.tzinfo is None:
                    dt = dt.replace(tzinfo=timezone.utc)
                date = int(dt.timestamp())
        except (ValueError, TypeError, OverflowError):
            pass

    message_id = MISSING
    mid = raw.get("Message-ID")
    if mid:
        mid = mid.strip().strip("<>").strip()
        if mid:
            message_id = mid

    from_addr = MISSING
    from_header = raw.get("From")
    if from_header:
        _, addr = email.utils.parseaddr(decode_encoded_words(from_header))
        cleaned = _clean_addr(addr)
        if cleaned:
            from_addr = cleaned

    cc = []
    for value in raw.get_all("Cc"):
        for _, addr in email.utils.getaddresses([decode_encoded_words(value)]):
            cleaned = _clean_addr(addr)
            if cleaned:
                cc.append(cleaned)

    subject = MISSING
    subject_header = raw.get("Subject")
    if subject_header:
        decoded = decode_encoded_words(subject_header).strip()
        if decoded:
            subject = decoded

    ct_value = raw.get("Content-Type")
    has_html = bool(ct_value and _main_type(ct_value) == "text/html")
    has_html = has_html or any(ct == "text/html" for ct, _ in raw.body_parts)

    return EmailRecord(date, message_id, tuple(cc), from_addr, subject, has_html)


def scan_corpus(directory):
    """Parse every .eml file under a directory, recursively.

    Files are processed in lexicographic byte order of their relative
    path, so the result is independent of filesystem enumeration order.
    Unparseable .eml files land on the skip-list; non-.eml files are
    ignored entirely.
    """
    root = Path(directory)
    if not root.is_dir():
        raise DirectoryUnreadable(f"not a readable directory: {directory}")
    try:
        files = [
            p for p in root.rglob("*") if p.is_file() and p.suffix.lower() == ".eml"
        ]
    except OSError as exc:
        raise DirectoryUnreadable(f"cannot scan {directory}: {exc}") from exc
    files.sort(key=lambda p: str(p.relative_to(root)).encode("utf-8"))

    records, skipped = [], []
    for path in files:
        rel = str(path.relative_to(root))
        try:
            data = path.read_bytes()
            record = extract_record(parse_eml(data, source_path=str(path)))
        except MalformedInput as exc:
            skipped.append(SkipEntry(rel, str(exc)))
        except OSError as exc:
            skipped.append(SkipEntry(rel, f"read error: {exc}"))
        else:
            records.append(record)
    return ScanResult(records, skipped)
