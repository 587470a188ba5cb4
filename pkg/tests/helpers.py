"""Test-side oracles: an independent ARFF well-formedness check, a naive
SSE recomputation, a naive silhouette, and a random dataset generator."""

import math
import random

from mailminer import AttributeSpec, Dataset, MISSING


# ---------------------------------------------------------------------------
# ARFF well-formedness


def _strip_inline_comment(text):
    idx = text.find(" %")
    return text[:idx] if idx >= 0 else text


def _take_token(text):
    """One ARFF token (quoted or bare) off the front; returns (token, rest)."""
    text = text.lstrip()
    if text.startswith("'"):
        i = 1
        while i < len(text):
            if text[i] == "\\":
                i += 2
            elif text[i] == "'":
                return text[1:i], text[i + 1 :]
            else:
                i += 1
        raise AssertionError(f"unterminated quote in {text!r}")
    for j, c in enumerate(text):
        if c in " \t":
            return text[:j], text[j:]
    return text, ""


def _split_arff_row(line):
    fields = []
    cur = []
    in_quote = False
    i = 0
    while i < len(line):
        c = line[i]
        if in_quote:
            if c == "\\" and i + 1 < len(line):
                cur.append(line[i + 1])
                i += 2
                continue
            if c == "'":
                in_quote = False
            else:
                cur.append(c)
            i += 1
        elif c == "'":
            in_quote = True
            i += 1
        elif c == ",":
            fields.append("".join(cur))
            cur = []
            i += 1
        else:
            cur.append(c)
            i += 1
    assert not in_quote, f"unterminated quote in row {line!r}"
    fields.append("".join(cur))
    return fields


def validate_arff(text):
    """Assert header keywords, attribute declarations and row arity."""
    lines = [l for l in text.split("\n") if l.strip()]
    assert lines, "empty ARFF output"
    assert lines[0].startswith("@relation "), "must open with @relation"
    n_attrs = 0
    i = 1
    while i < len(lines) and lines[i].startswith("@attribute "):
        decl = _strip_inline_comment(lines[i][len("@attribute ") :])
        name, rest = _take_token(decl)
        assert name, f"empty attribute name in {lines[i]!r}"
        type_text = rest.strip()
        if type_text.startswith("{"):
            assert type_text.endswith("}"), f"unclosed nominal domain: {lines[i]!r}"
            assert _split_arff_row(type_text[1:-1]), "empty nominal domain"
        else:
            assert type_text in ("numeric", "string"), f"bad type: {type_text!r}"
        n_attrs += 1
        i += 1
    assert n_attrs > 0, "no @attribute declarations"
    assert i < len(lines) and lines[i] == "@data", "missing @data section"
    for row_line in lines[i + 1 :]:
        fields = _split_arff_row(row_line)
        assert len(fields) == n_attrs, (
            f"row has {len(fields)} fields, expected {n_attrs}: {row_line!r}"
        )


# ---------------------------------------------------------------------------
# Naive clustering oracles (deliberately independent of mailminer.cluster)


def naive_sse(ds, model):
    mins, maxs = {}, {}
    for j, spec in enumerate(ds.schema):
        if spec.kind in ("numeric", "date"):
            vals = [r[j] for r in ds.rows if r[j] is not MISSING]
            if vals:
                mins[j], maxs[j] = min(vals), max(vals)
    total = 0.0
    for row, ci in zip(ds.rows, model.assignment):
        centroid = model.centroids[ci]
        acc = 0.0
        for j, spec in enumerate(ds.schema):
            x, c = row[j], centroid[j]
            if x is MISSING or c is MISSING:
                acc += 1.0
            elif spec.kind in ("numeric", "date"):
                if j in mins and maxs[j] != mins[j]:
                    acc += ((x - c) / (maxs[j] - mins[j])) ** 2
            elif x != c:
                acc += 1.0
        total += acc
    return total


def naive_silhouette(ds, assignment, pair_distance):
    n = len(ds.rows)
    clusters = {}
    for i, ci in enumerate(assignment):
        clusters.setdefault(ci, []).append(i)
    total = 0.0
    for i in range(n):
        own = clusters[assignment[i]]
        if len(own) <= 1:
            continue
        a = sum(pair_distance(i, j) for j in own if j != i) / (len(own) - 1)
        bs = [
            sum(pair_distance(i, j) for j in mem) / len(mem)
            for ci, mem in clusters.items()
            if ci != assignment[i] and mem
        ]
        if not bs:
            continue
        b = min(bs)
        if max(a, b) > 0:
            total += (b - a) / max(a, b)
    return total / n


# ---------------------------------------------------------------------------
# Random dataset generation

_WORDS = [
    "alpha", "beta", "gamma", "delta", "", "?", 'a,"b"', "line1\nline2",
    "café", "x;y", "  padded  ", "'quoted'",
]
_LABEL_POOL = ["red", "green", "blue", "cyan", "mauve", "ochre"]


def random_dataset(rnd: random.Random, max_rows=32, min_rows=1,
                   kinds=("numeric", "nominal", "text", "date")):
    n_rows = rnd.randint(min_rows, max_rows)
    n_cols = rnd.randint(1, 5)
    schema = []
    for j in range(n_cols):
        kind = rnd.choice(kinds)
        if kind == "nominal":
            domain = tuple(rnd.sample(_LABEL_POOL, rnd.randint(2, 4)))
            schema.append(AttributeSpec(f"col{j}", "nominal", domain))
        else:
            schema.append(AttributeSpec(f"col{j}", kind))
    rows = []
    for _ in range(n_rows):
        row = []
        for spec in schema:
            if rnd.random() < 0.15:
                row.append(MISSING)
            elif spec.kind in ("numeric", "date"):
                row.append(rnd.uniform(-1e3, 1e3))
            elif spec.kind == "nominal":
                row.append(rnd.choice(spec.nominal_domain))
            else:
                row.append(rnd.choice(_WORDS))
        rows.append(row)
    return Dataset(schema, rows, relation_name=rnd.choice(["emails", "rel one", "d"]))


def hints_for(ds):
    hints = {}
    for spec in ds.schema:
        if spec.kind == "nominal":
            hints[spec.name] = ("nominal", spec.nominal_domain)
        else:
            hints[spec.name] = spec.kind
    return hints
