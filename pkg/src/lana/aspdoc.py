"""Cross-linked HTML documentation for annotated programs.

The site consists of ``index.html`` with the block summary, one page per
top-level block (nested blocks become sections of their ancestor's page)
and, optionally, one source page per block.  Pages are plain XHTML-style
strings with a single embedded stylesheet and no scripts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from html import escape
from pathlib import Path
from typing import Optional

from .annotations import extract_annotations, AnnotationText
from .model import (
    AnnotatedProgram,
    AtomDecl,
    Block,
    Condition,
    FromList,
    SameRangeAs,
    Signature,
    TermDecl,
    WithBody,
    hidden_atoms,
)

ENTRY = "index.html"
DIALECTS = ("gringo", "dlv")
_KEYWORDS = {"gringo": {"not"}, "dlv": {"not", "v"}}
_SIG_LABELS = {"input": "Input", "requires": "Requires", "output": "Output", "defines": "Defines"}
_COND_LABELS = {"precondition": "Precondition", "postcondition": "Postcondition", "assert": "Assertion"}

STYLE = """
body { font-family: sans-serif; margin: 2em; max-width: 60em; color: #222; }
h1, h2, h3, h4 { color: #234; }
ul.blocks { list-style: none; padding-left: 1.5em; }
section.block { border-left: 3px solid #9ab; padding-left: 1em; margin: 1.5em 0; }
dt { font-family: monospace; font-weight: bold; margin-top: .5em; }
dd { margin-left: 2em; }
pre.source { background: #f6f6f0; padding: 1em; overflow-x: auto; }
.lana { color: #2a6; }
.comment { color: #888; }
.kw { font-weight: bold; }
.lineno { color: #aaa; user-select: none; }
a { color: #14a; text-decoration: none; }
a:hover { text-decoration: underline; }
""".strip()


@dataclass(frozen=True)
class DocOptions:
    output_dir: Path = Path(".")
    show_hidden_atoms: bool = True
    include_source: bool = True
    include_lana_in_source: bool = True
    dialect: str = "gringo"

    def __post_init__(self):
        if self.dialect not in DIALECTS:
            raise ValueError(f"dialect must be one of {', '.join(DIALECTS)}")


@dataclass
class DocSite:
    pages: dict = field(default_factory=dict)
    entry: str = ENTRY


def slug(name: str) -> str:
    """File- and anchor-safe form of a name; distinct names stay distinct."""
    return re.sub(r"[^A-Za-z0-9_-]", lambda m: f".{ord(m.group()):x}.", name)


# --- link targets ------------------------------------------------------------------


class _Links:
    """Where every block, declaration and source view lives in the site."""

    def __init__(self, ap: AnnotatedProgram, opts: DocOptions):
        self.ap = ap
        self.opts = opts
        self.page_of: dict = {}
        for block in ap.blocks():
            self.page_of[block.name] = self._page_block(block)
        counts: dict = {}
        for block in ap.blocks():
            for d in block.atom_decls:
                counts[d.signature] = counts.get(d.signature, 0) + 1
        self.atom_anchor: dict = {}
        for block in ap.blocks():
            for d in block.atom_decls:
                anchor = f"atom-{slug(d.predicate)}-{d.signature.arity}"
                if counts[d.signature] > 1:
                    anchor += f"-{slug(block.name)}"
                self.atom_anchor[(block.name, d.signature)] = anchor

    def _page_block(self, block: Block) -> Block:
        path = block.path()
        return path[0] if len(path) == 1 else path[1]

    def block_page(self, block: Block) -> str:
        return f"block-{slug(self.page_of[block.name].name)}.html"

    def block_href(self, block: Block) -> str:
        return f"{self.block_page(block)}#blk-{slug(block.name)}"

    def source_page(self, block: Block) -> str:
        return f"source-{slug(block.name)}.html"

    def cond_anchor(self, block: Block, cond: Condition) -> str:
        return f"cond-{slug(block.name)}-{slug(cond.name)}"

    def term_anchor(self, block: Block, name: str) -> str:
        return f"term-{slug(block.name)}-{slug(name)}"

    def atom_owner(self, block: Block, sig: Signature) -> Optional[Block]:
        for b in reversed(block.path()):
            if any(d.signature == sig for d in b.atom_decls):
                return b
        return next((b for b in self.ap.blocks() if any(d.signature == sig for d in b.atom_decls)), None)

    def term_owner(self, block: Block, name: str) -> Optional[Block]:
        for b in reversed(block.path()):
            if any(name in d.names for d in b.term_decls):
                return b
        return next((b for b in self.ap.blocks() if any(name in d.names for d in b.term_decls)), None)

    def atom_href(self, block: Block, sig: Signature) -> Optional[str]:
        owner = self.atom_owner(block, sig)
        if owner is None:
            return None
        return f"{self.block_page(owner)}#{self.atom_anchor[(owner.name, sig)]}"

    def term_href(self, block: Block, name: str) -> Optional[str]:
        owner = self.term_owner(block, name)
        if owner is None:
            return None
        return f"{self.block_page(owner)}#{self.term_anchor(owner, name)}"


def _link(href: Optional[str], text: str, cls: str = "") -> str:
    attr = f' class="{cls}"' if cls else ""
    if href is None:
        return f"<span{attr}>{escape(text)}</span>" if cls else escape(text)
    return f'<a href="{escape(href)}"{attr}>{escape(text)}</a>'


def _page(title: str, body: str) -> str:
    return (
        "<!DOCTYPE html>\n"
        '<html xmlns="http://www.w3.org/1999/xhtml" lang="en">\n'
        "<head>\n"
        '<meta charset="utf-8"/>\n'
        f"<title>{escape(title)}</title>\n"
        f"<style>\n{STYLE}\n</style>\n"
        "</head>\n"
        f"<body>\n{body}</body>\n"
        "</html>\n"
    )


def _paragraphs(text: str) -> str:
    parts = [p.strip() for p in re.split(r"\n\s*\n", text) if p.strip()]
    return "".join(f"<p>{escape(' '.join(p.split()))}</p>\n" for p in parts)


# --- index -------------------------------------------------------------------------


def _summary(block: Block, links: _Links) -> str:
    out = f"<li>{_link(links.block_href(block), block.name)}"
    if block.children:
        out += '\n<ul class="blocks">\n' + "".join(_summary(c, links) for c in block.children) + "</ul>\n"
    return out + "</li>\n"


def _index(ap: AnnotatedProgram, links: _Links) -> str:
    body = "<h1>Program documentation</h1>\n<h2>Block structure</h2>\n"
    body += f'<ul class="blocks summary">\n{_summary(ap.root, links)}</ul>\n'
    if ap.source_files:
        files = "".join(f"<li>{escape(f)}</li>\n" for f in ap.source_files)
        body += f"<h2>Source files</h2>\n<ul>\n{files}</ul>\n"
    return _page("Program documentation", body)


# --- block sections ----------------------------------------------------------------


def _atom_decl(block: Block, d: AtomDecl, links: _Links) -> str:
    head = escape(d.predicate)
    if d.term_names:
        args = ",".join(_link(links.term_href(block, t), t) for t in d.term_names)
        head += f"({args})"
    anchor = links.atom_anchor[(block.name, d.signature)]
    return f'<dt id="{anchor}">{head}</dt>\n<dd>{_paragraphs(d.description) or "<p/>"}</dd>\n'


def _type_text(block: Block, t: TermDecl, links: _Links) -> str:
    spec = t.type_spec
    if isinstance(spec, FromList):
        return "from " + escape(", ".join(map(str, spec.terms)))
    if isinstance(spec, WithBody):
        return "with " + escape(", ".join(map(str, spec.body)))
    if isinstance(spec, SameRangeAs):
        return "same range as " + _link(links.term_href(block, spec.term_name), spec.term_name)
    return "any term"


def _term_decl(block: Block, t: TermDecl, links: _Links) -> str:
    def name(n: str) -> str:
        first = next(d for d in block.term_decls if n in d.names)
        if first is not t:  # a repeated name keeps its anchor on the first declaration
            return escape(n)
        return f'<span id="{links.term_anchor(block, n)}">{escape(n)}</span>'

    names = ", ".join(name(n) for n in t.names)
    return (
        f"<dt>{names}</dt>\n<dd><p>Type: {_type_text(block, t, links)}</p>\n"
        f"{_paragraphs(t.description)}</dd>\n"
    )


def _signature_list(block: Block, sigs, links: _Links) -> str:
    return ", ".join(_link(links.atom_href(block, s), str(s)) for s in sigs)


def _condition(block: Block, c: Condition, links: _Links) -> str:
    anchor = links.cond_anchor(block, c)
    atoms = ", ".join(_link(links.atom_href(block, Signature(a.predicate, len(a.args))), str(a)) for a in c.test_atoms)
    rules = "\n".join(r.render() for r in c.rules)
    return (
        f'<dt id="{anchor}">{_COND_LABELS[c.kind]} {escape(c.name)}</dt>\n<dd>'
        f"{_paragraphs(c.description)}"
        f"<p>@{escape(c.mode)} {atoms} (<a href=\"#{anchor}-rules\">rules</a>)</p>\n"
        f'<pre id="{anchor}-rules">{escape(rules)}</pre>\n</dd>\n'
    )


def _block_section(block: Block, depth: int, links: _Links, opts: DocOptions, nest: bool = True) -> str:
    h = min(depth + 1, 6)
    sub = min(depth + 2, 6)
    out = [f'<section class="block" id="blk-{slug(block.name)}">\n<h{h}>Block {escape(block.name)}</h{h}>\n']
    out.append(_paragraphs(block.description))
    if block.parent is not None:
        out.append(f"<p>Part of {_link(links.block_href(block.parent), block.parent.name)}</p>\n")
    if opts.include_source:
        out.append(f"<p>{_link(links.source_page(block), 'Source')}</p>\n")
    if block.input_sig:
        label = _SIG_LABELS[block.input_keyword]
        out.append(f"<h{sub}>{label}</h{sub}>\n<p>{_signature_list(block, block.input_sig, links)}</p>\n")
    if block.output_sig:
        label = _SIG_LABELS[block.output_keyword]
        out.append(f"<h{sub}>{label}</h{sub}>\n<p>{_signature_list(block, block.output_sig, links)}</p>\n")
    if block.atom_decls:
        items = "".join(_atom_decl(block, d, links) for d in block.atom_decls)
        out.append(f"<h{sub}>Predicates</h{sub}>\n<dl>\n{items}</dl>\n")
    if block.term_decls:
        items = "".join(_term_decl(block, t, links) for t in block.term_decls)
        out.append(f"<h{sub}>Terms</h{sub}>\n<dl>\n{items}</dl>\n")
    if block.conditions:
        items = "".join(_condition(block, c, links) for c in block.conditions)
        out.append(f"<h{sub}>Conditions</h{sub}>\n<dl>\n{items}</dl>\n")
    if opts.show_hidden_atoms and block.declares_signatures:
        hidden = hidden_atoms(block)
        listed = _signature_list(block, hidden, links) if hidden else "none"
        out.append(f"<h{sub}>Hidden Atoms</h{sub}>\n<p>{listed}</p>\n")
    if block.rules:
        rules = "\n".join(_highlight(r.render(), block, links, opts) for r in block.rules)
        out.append(f'<h{sub}>Rules</h{sub}>\n<pre class="source">{rules}</pre>\n')
    if block.children:
        out.append(f"<h{sub}>Sub blocks</h{sub}>\n")
        if nest:
            out.extend(_block_section(c, depth + 1, links, opts) for c in block.children)
        else:
            items = "".join(f"<li>{_link(links.block_href(c), c.name)}</li>\n" for c in block.children)
            out.append(f"<ul>\n{items}</ul>\n")
    out.append("</section>\n")
    return "".join(out)


def _block_page(block: Block, links: _Links, opts: DocOptions, nest: bool = True) -> str:
    body = f'<p><a href="{ENTRY}">Index</a></p>\n' + _block_section(block, 0, links, opts, nest)
    return _page(f"Block {block.name}", body)


# --- source views ------------------------------------------------------------------

_TOKEN = re.compile(
    r'(?P<string>"(?:\\.|[^"\\\n])*")|(?P<comment>%[^\n]*)|(?P<directive>#\w+)'
    r"|(?P<name>[a-z][A-Za-z0-9_']*)|(?P<var>[A-Z_][A-Za-z0-9_']*)|(?P<other>.)",
    re.S,
)


def _arity(text: str, pos: int) -> int:
    """Argument count of the term starting at ``pos`` (just past the name)."""
    i = pos
    while i < len(text) and text[i] in " \t":
        i += 1
    if i >= len(text) or text[i] != "(":
        return 0
    depth, commas = 0, 0
    for j in range(i, len(text)):
        ch = text[j]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth == 0:
                return commas + 1
        elif ch == "," and depth == 1:
            commas += 1
    return commas + 1


def _highlight(code: str, block: Block, links: _Links, opts: DocOptions) -> str:
    out = []
    keywords = _KEYWORDS[opts.dialect]
    for m in _TOKEN.finditer(code):
        kind, text = m.lastgroup, m.group()
        if kind == "comment":
            out.append(f'<span class="comment">{escape(text)}</span>')
        elif kind == "directive" or (kind == "name" and text in keywords):
            out.append(f'<span class="kw">{escape(text)}</span>')
        elif kind == "name":
            sig = Signature(text, _arity(code, m.end()))
            out.append(_link(links.atom_href(block, sig), text))
        elif kind == "var":
            out.append(_link(links.term_href(block, text), text))
        else:
            out.append(escape(text))
    return "".join(out)


def _file_of(ap: AnnotatedProgram, block: Block) -> list[str]:
    """Files covered by a default block."""
    if block.parent is None:
        return list(ap.source_files)
    index = block.parent.children.index(block)
    return [ap.source_files[index]] if index < len(ap.source_files) else []


def _line_owners(ap: AnnotatedProgram, file: str, nlines: int) -> list[Block]:
    """Innermost block enclosing each line of ``file`` (index 0 is line 1)."""
    default = next(
        (b for b in reversed(list(ap.blocks())) if b.is_default and file in _file_of(ap, b)),
        ap.root,
    )
    owner = [default] * nlines
    for block in ap.blocks():  # pre-order, so inner blocks overwrite outer ones
        if block.is_default or block.location is None or block.location.file != file:
            continue
        last = block.end.line if block.end else nlines
        for line in range(block.location.line, min(last, nlines) + 1):
            owner[line - 1] = block
    return owner


def _annotation_spans(text: str, file: str) -> list[tuple[int, int]]:
    """Offsets of every ``%** ... *%`` environment in ``text``."""
    starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def offset(loc) -> int:
        return starts[loc.line - 1] + loc.column - 1

    spans = []
    for seg in extract_annotations(text, file):
        if isinstance(seg, AnnotationText):
            spans.append((text.rfind("%**", 0, offset(seg.start) + 1), offset(seg.end)))
    return spans


def _line_pieces(text: str, file: str) -> list[list[tuple[bool, str]]]:
    """Each line of ``text`` split into ``(is_annotation, fragment)`` pieces."""
    flags = [False] * len(text)
    for begin, end in _annotation_spans(text, file):
        flags[begin:end] = [True] * (end - begin)
    lines, offset = [], 0
    for line in text.split("\n"):
        pieces: list = []
        for i, ch in enumerate(line):
            flag = flags[offset + i]
            if pieces and pieces[-1][0] == flag:
                pieces[-1] = (flag, pieces[-1][1] + ch)
            else:
                pieces.append((flag, ch))
        lines.append(pieces)
        offset += len(line) + 1
    return lines


def _source_lines(ap: AnnotatedProgram, block: Block) -> list[tuple[str, int, int]]:
    """``(file, first line, last line)`` ranges shown on a block's source page."""
    if block.is_default:
        return [(f, 1, ap.sources.get(f, "").count("\n") + 1) for f in _file_of(ap, block)]
    if block.location is None:
        return []
    text = ap.sources.get(block.location.file, "")
    last = block.end.line if block.end else text.count("\n") + 1
    return [(block.location.file, block.location.line, last)]


def _source_page(ap: AnnotatedProgram, block: Block, links: _Links, opts: DocOptions) -> str:
    body = [
        f'<p><a href="{ENTRY}">Index</a> | {_link(links.block_href(block), "Block " + block.name)}</p>\n',
        f"<h1>Source of block {escape(block.name)}</h1>\n",
    ]
    for file, first, last in _source_lines(ap, block):
        text = ap.sources.get(file, "")
        lines = _line_pieces(text, file)
        owners = _line_owners(ap, file, len(lines))
        rendered = []
        previous_blank = False
        for n in range(first, min(last, len(lines)) + 1):
            pieces = [(lana, frag) for lana, frag in lines[n - 1] if opts.include_lana_in_source or not lana]
            if not "".join(frag for _, frag in pieces).strip():
                if previous_blank:
                    continue
                previous_blank = True
            else:
                previous_blank = False
            owner = owners[n - 1] or block
            content = "".join(
                f'<span class="lana">{escape(frag)}</span>' if lana else _highlight(frag, owner, links, opts)
                for lana, frag in pieces
            )
            rendered.append(f'<span class="lineno">{n:>4} </span>{content}')
        body.append(f"<h2>{escape(file)}</h2>\n<pre class=\"source\">{chr(10).join(rendered)}</pre>\n")
    return _page(f"Source of {block.name}", "".join(body))


# --- entry points ------------------------------------------------------------------


def generate_docs(ap: AnnotatedProgram, opts: Optional[DocOptions] = None) -> DocSite:
    """Build every page of the documentation site in memory."""
    opts = opts or DocOptions()
    links = _Links(ap, opts)
    site = DocSite()
    site.pages[ENTRY] = _index(ap, links)
    # the root page shows only the root's own content; its children get pages
    site.pages[links.block_page(ap.root)] = _block_page(ap.root, links, opts, nest=False)
    for block in ap.root.children:
        site.pages[links.block_page(block)] = _block_page(block, links, opts)
    if opts.include_source:
        for block in ap.blocks():
            site.pages[links.source_page(block)] = _source_page(ap, block, links, opts)
    return site


def write_site(site: DocSite, output_dir) -> list[Path]:
    """Write every page below ``output_dir``; returns the written paths."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name in sorted(site.pages):
        path = out / name
        path.write_text(site.pages[name], encoding="utf-8")
        written.append(path)
    return written
