"""Entity typology: classes, type/subtype trees and attribute schemas.

Config format (UTF-8, two-space indentation is conventional but any
consistent deeper indent works)::

    # comment
    class Location
      attr Pays: string
      attr Nombre d'habitants: integer
      Hydronyme
        Lac
        Fleuve

``class NAME`` lines start at column 0.  Indented lines are type nodes,
nested by indentation, except ``attr NAME: KIND`` lines which must sit
directly under the class and declare a class-level attribute.  KIND is
one of ``string``, ``integer``, ``decimal``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

__all__ = [
    "NON_RECONNU",
    "DuplicateName",
    "EmptyClassSet",
    "NEType",
    "Taxonomy",
    "TaxonomyError",
    "TypeNode",
    "UnknownClass",
    "UnknownPath",
    "UnknownValueKind",
    "default_taxonomy",
    "dump_taxonomy",
    "load_taxonomy",
]

VALUE_KINDS = ("string", "integer", "decimal")


class TaxonomyError(ValueError):
    def __init__(self, message: str, lineno: int | None = None, source: str | None = None):
        self.message = message
        self.lineno = lineno
        self.source = source
        super().__init__(str(self))

    def __str__(self) -> str:
        where = ""
        if self.lineno is not None:
            where = f"{self.source or '<taxonomy>'}:{self.lineno}: "
        return f"{where}{type(self).__name__}: {self.message}"


class DuplicateName(TaxonomyError):
    pass


class UnknownValueKind(TaxonomyError):
    pass


class EmptyClassSet(TaxonomyError):
    pass


class UnknownClass(TaxonomyError):
    pass


class UnknownPath(TaxonomyError):
    pass


@dataclass(frozen=True)
class NEType:
    class_name: str
    type_path: tuple[str, ...] = ()

    @property
    def label(self) -> str:
        return ".".join((self.class_name, *self.type_path))

    @classmethod
    def from_label(cls, label: str) -> NEType:
        head, *path = [p.strip() for p in label.split(".")]
        return cls(head, tuple(path))

    def is_under(self, other: NEType) -> bool:
        """Same class and ``other``'s path is a prefix of ours."""
        return self.class_name == other.class_name and self.type_path[: len(other.type_path)] == other.type_path

    def __str__(self) -> str:
        return self.label


#: Sentinel type for capitalized sequences no grammar recognized.
NON_RECONNU = NEType("NonReconnu")


@dataclass
class TypeNode:
    name: str
    children: dict[str, TypeNode] = field(default_factory=dict)


@dataclass
class EntityClass:
    name: str
    root: TypeNode
    attributes: dict[str, str] = field(default_factory=dict)


class Taxonomy:
    def __init__(self, classes: dict[str, EntityClass]):
        self.classes = classes

    def class_names(self) -> list[str]:
        return list(self.classes)

    def attributes(self, class_name: str) -> dict[str, str]:
        """Attribute name -> value kind, in declaration order."""
        return self.classes[class_name].attributes

    def has_path(self, class_name: str, path: tuple[str, ...] | list[str]) -> bool:
        cls = self.classes.get(class_name)
        if cls is None:
            return False
        node = cls.root
        for part in path:
            nxt = node.children.get(part)
            if nxt is None:
                return False
            node = nxt
        return True

    def paths(self, class_name: str) -> list[tuple[str, ...]]:
        out: list[tuple[str, ...]] = []

        def walk(node: TypeNode, prefix: tuple[str, ...]) -> None:
            for name, child in node.children.items():
                out.append(prefix + (name,))
                walk(child, prefix + (name,))

        walk(self.classes[class_name].root, ())
        return out

    def validate_type(self, class_name: str, type_path: tuple[str, ...] | list[str] = ()) -> NEType:
        if class_name not in self.classes:
            raise UnknownClass(f"unknown entity class {class_name!r}")
        path = tuple(type_path)
        if not self.has_path(class_name, path):
            raise UnknownPath(f"{'.'.join((class_name, *path))!r} is not declared")
        return NEType(class_name, path)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Taxonomy) and dump_taxonomy(self) == dump_taxonomy(other)

    def __repr__(self) -> str:
        return f"Taxonomy({', '.join(self.classes)})"


def validate_type(taxonomy: Taxonomy, class_name: str, type_path: tuple[str, ...] | list[str] = ()) -> NEType:
    return taxonomy.validate_type(class_name, type_path)


def load_taxonomy(config: str, source: str | None = None) -> Taxonomy:
    classes: dict[str, EntityClass] = {}
    current: EntityClass | None = None
    # stack of (indent, node); the class root sits at indent 0
    stack: list[tuple[int, TypeNode]] = []

    for lineno, raw in enumerate(config.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip() if not raw.lstrip().startswith("#") else ""
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip(" \t"))
        body = line.strip()

        if indent == 0:
            if not body.startswith("class "):
                raise TaxonomyError(f"expected 'class NAME', got {body!r}", lineno, source)
            name = body[len("class "):].strip()
            if not name or "." in name:
                raise TaxonomyError(f"bad class name {name!r}", lineno, source)
            if name in classes:
                raise DuplicateName(f"class {name!r} declared twice", lineno, source)
            if name == NON_RECONNU.class_name:
                raise DuplicateName(f"{name!r} is reserved", lineno, source)
            current = EntityClass(name, TypeNode(name))
            classes[name] = current
            stack = [(0, current.root)]
            continue

        if current is None:
            raise TaxonomyError("indented line before any class", lineno, source)

        while stack and stack[-1][0] >= indent:
            stack.pop()
        if not stack:
            raise TaxonomyError("inconsistent indentation", lineno, source)

        if body.startswith("attr "):
            if stack[-1][1] is not current.root:
                raise TaxonomyError("attributes must be declared at class level", lineno, source)
            name, sep, kind = body[len("attr "):].rpartition(":")
            name, kind = name.strip(), kind.strip()
            if not sep or not name:
                raise TaxonomyError(f"expected 'attr NAME: KIND', got {body!r}", lineno, source)
            if any(c in name for c in ",={}"):
                raise TaxonomyError(f"attribute name {name!r} may not contain ',', '=', '{{' or '}}'", lineno, source)
            if kind not in VALUE_KINDS:
                raise UnknownValueKind(f"{kind!r} (expected one of {', '.join(VALUE_KINDS)})", lineno, source)
            if name in current.attributes:
                raise DuplicateName(f"attribute {name!r} declared twice in {current.name}", lineno, source)
            current.attributes[name] = kind
            continue

        parent = stack[-1][1]
        if "." in body or "{" in body or "}" in body:
            raise TaxonomyError(f"type name {body!r} may not contain '.', '{{' or '}}'", lineno, source)
        if body in parent.children:
            raise DuplicateName(f"{body!r} appears twice under {parent.name!r}", lineno, source)
        node = TypeNode(body)
        parent.children[body] = node
        stack.append((indent, node))

    if not classes:
        raise EmptyClassSet("configuration declares no class", None, source)
    return Taxonomy(classes)


def dump_taxonomy(taxonomy: Taxonomy) -> str:
    lines: list[str] = []
    for cls in taxonomy.classes.values():
        lines.append(f"class {cls.name}")
        for name, kind in cls.attributes.items():
            lines.append(f"  attr {name}: {kind}")

        def walk(node: TypeNode, depth: int) -> None:
            for child in node.children.values():
                lines.append("  " * depth + child.name)
                walk(child, depth + 1)

        walk(cls.root, 1)
    return "\n".join(lines) + "\n"


def default_config_text() -> str:
    return resources.files("localner.data").joinpath("taxonomy.cfg").read_text(encoding="utf-8")


def default_taxonomy() -> Taxonomy:
    return load_taxonomy(default_config_text(), source="taxonomy.cfg")


def load_taxonomy_file(path: str | Path) -> Taxonomy:
    path = Path(path)
    return load_taxonomy(path.read_text(encoding="utf-8"), source=str(path))
