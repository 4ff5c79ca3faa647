"""Tree model for weakly increasing k-ary trees.

A *weakly increasing tree* is a rooted plane tree whose nodes carry positive
integer labels subject to two constraints:

* along every root-to-leaf path the labels strictly increase;
* the set of labels used in the tree is a full interval {1, ..., m}, where m
  is the largest label (so the same label may occur in different branches).

Nodes have k positional child slots (k = 2 for binary trees).  Slots are
significant: a binary node with a single child is either "left child only" or
"right child only", and the two are distinct trees.

Two layers are modelled:

``LabeledTree``
    The labeled skeleton.  Empty slots are ``None``.

``CompletedTree``
    The same skeleton with every empty slot filled by an unlabeled
    bullet-leaf (``BULLET``).  The *size* of the tree is its bullet count;
    a tree with N labeled nodes has size (k-1)*N + 1.

Completed trees grow through ``evolution_step``: a nonempty subset of
bullet-leaves is replaced by nodes carrying the next unused label, each with
k fresh bullet-leaves.  Every completed tree is produced by exactly one
sequence of such steps starting from the one-node root tree, which is what
makes counting and uniform sampling by recurrence possible.

All tree values are immutable; operations return new trees.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Union


class _Bullet:
    """Singleton marker for an unlabeled leaf of a completed tree."""

    __slots__ = ()
    _instance: Optional["_Bullet"] = None

    def __new__(cls) -> "_Bullet":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "BULLET"


BULLET = _Bullet()

#: Content of a child slot: absent, bullet-leaf, or a child node.
Slot = Union[None, _Bullet, "Node"]

#: A node position: the sequence of slot indices on the path from the root.
Path = tuple[int, ...]


@dataclass(frozen=True)
class Node:
    """A labeled node with a fixed tuple of positional child slots."""

    label: int
    slots: tuple[Slot, ...]


@dataclass(frozen=True)
class LabeledTree:
    """A weakly increasing tree given by its labeled skeleton."""

    root: Node


@dataclass(frozen=True)
class CompletedTree:
    """A weakly increasing tree with all empty slots filled by bullets."""

    arity: int
    root: Node

    @cached_property
    def size(self) -> int:
        """Number of bullet-leaves."""
        return sum(1 for _ in bullet_positions(self.root))

    @cached_property
    def max_label(self) -> int:
        return max(node.label for _, node in iter_nodes(self.root))


@dataclass(frozen=True)
class ValidationResult:
    """Outcome of ``validate``; falsy when a constraint is violated.

    ``kind`` is one of ``"malformed"`` (structural problem: wrong slot
    count, bad label value), ``"label-order"`` (labels not strictly
    increasing along a branch) or ``"label-gap"`` (label set is not a full
    interval {1..m}).  ``path`` locates the offending node.
    """

    ok: bool
    kind: Optional[str] = None
    path: Optional[Path] = None
    message: str = "ok"

    def __bool__(self) -> bool:
        return self.ok


def iter_nodes(root: Node) -> Iterator[tuple[Path, Node]]:
    """Yield (path, node) for every labeled node, in preorder."""
    stack: list[tuple[Path, Node]] = [((), root)]
    while stack:
        path, node = stack.pop()
        yield path, node
        for i in range(len(node.slots) - 1, -1, -1):
            child = node.slots[i]
            if isinstance(child, Node):
                stack.append((path + (i,), child))


def bullet_positions(root: Node) -> list[Path]:
    """Paths of all bullet-leaves, in preorder (the canonical leaf order)."""
    out: list[Path] = []

    def walk(node: Node, path: Path) -> None:
        for i, slot in enumerate(node.slots):
            if slot is BULLET:
                out.append(path + (i,))
            elif isinstance(slot, Node):
                walk(slot, path + (i,))

    walk(root, ())
    return out


def node_at(root: Node, path: Path) -> Slot:
    """Slot content at ``path`` (the root node for the empty path)."""
    current: Slot = root
    for i in path:
        if not isinstance(current, Node) or not 0 <= i < len(current.slots):
            raise ValueError(f"no slot at path {path!r}")
        current = current.slots[i]
    return current


def validate(tree: LabeledTree, arity: int) -> ValidationResult:
    """Check the two defining label constraints for the given arity.

    Structural problems (a node whose slot tuple does not have exactly
    ``arity`` entries, or a non-positive label) are reported as kind
    ``"malformed"``, distinct from the label-constraint violations.
    """
    if arity < 2:
        raise ValueError(f"arity must be >= 2, got {arity}")
    labels: set[int] = set()
    for path, node in iter_nodes(tree.root):
        if len(node.slots) != arity:
            return ValidationResult(
                False, "malformed", path,
                f"node at {path!r} has {len(node.slots)} slots, expected {arity}",
            )
        if not isinstance(node.label, int) or node.label < 1:
            return ValidationResult(
                False, "malformed", path,
                f"node at {path!r} has invalid label {node.label!r}",
            )
        labels.add(node.label)
        for i, slot in enumerate(node.slots):
            if isinstance(slot, Node) and slot.label <= node.label:
                return ValidationResult(
                    False, "label-order", path + (i,),
                    f"label {slot.label} at {path + (i,)!r} does not exceed parent label {node.label}",
                )
    m = max(labels)
    if labels != set(range(1, m + 1)):
        gap = min(set(range(1, m + 1)) - labels)
        witness = next(p for p, nd in iter_nodes(tree.root) if nd.label > gap)
        return ValidationResult(
            False, "label-gap", witness,
            f"label {gap} is missing although {m} occurs (witness node at {witness!r})",
        )
    return ValidationResult(True)


def complete(tree: LabeledTree, arity: int) -> CompletedTree:
    """Fill every empty slot with a bullet-leaf.

    The labeled skeleton is unchanged; the result's size is
    (arity-1) * node_count + 1.
    """
    result = validate(tree, arity)
    if not result:
        raise ValueError(f"invalid tree: {result.message}")

    def fill(node: Node) -> Node:
        return Node(
            node.label,
            tuple(
                fill(s) if isinstance(s, Node) else BULLET
                for s in node.slots
            ),
        )

    return CompletedTree(arity, fill(tree.root))


def root_tree(arity: int) -> CompletedTree:
    """The smallest completed tree: one node labeled 1, all slots bullets."""
    if arity < 2:
        raise ValueError(f"arity must be >= 2, got {arity}")
    return CompletedTree(arity, Node(1, (BULLET,) * arity))


def evolution_step(
    t: CompletedTree, leaf_subset, next_label: int
) -> CompletedTree:
    """Expand a nonempty subset of bullet-leaves into nodes labeled ``next_label``.

    Each selected bullet is replaced by a node carrying ``next_label`` and
    ``t.arity`` fresh bullets, so the size grows by ``len(leaf_subset) *
    (arity - 1)``.  ``next_label`` must be exactly one more than the current
    maximal label.
    """
    subset = {tuple(p) for p in leaf_subset}
    if not subset:
        raise ValueError("leaf subset must be nonempty")
    if next_label != t.max_label + 1:
        raise ValueError(
            f"next label must be {t.max_label + 1}, got {next_label}"
        )
    for p in subset:
        if node_at(t.root, p) is not BULLET:
            raise ValueError(f"position {p!r} is not a bullet-leaf")

    k = t.arity
    fresh = (BULLET,) * k

    def rebuild(node: Node, path: Path) -> Node:
        new_slots: list[Slot] = []
        for i, slot in enumerate(node.slots):
            p = path + (i,)
            if slot is BULLET:
                new_slots.append(Node(next_label, fresh) if p in subset else BULLET)
            else:
                assert isinstance(slot, Node)
                new_slots.append(rebuild(slot, p))
        return Node(node.label, tuple(new_slots))

    return CompletedTree(k, rebuild(t.root, ()))


# --------------------------------------------------------------------------
# Canonical byte encoding
#
# Format (documented in README.md):
#   varint(arity), then the labeled nodes in preorder, each encoded as
#   varint(label) followed by ceil(arity/8) occupancy-mask bytes
#   (little-endian; bit i set <=> slot i holds a labeled child).
# Varints are unsigned LEB128.  Bullets are the unset mask bits, so the
# encoding is injective on completed trees and decodes uniquely.
# --------------------------------------------------------------------------


def _write_varint(out: bytearray, x: int) -> None:
    while x >= 0x80:
        out.append((x & 0x7F) | 0x80)
        x >>= 7
    out.append(x)


def _read_varint(data: bytes, pos: int) -> tuple[int, int]:
    x = 0
    shift = 0
    while True:
        if pos >= len(data):
            raise ValueError("truncated encoding: varint runs past end")
        byte = data[pos]
        pos += 1
        x |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return x, pos
        shift += 7


def canonical_encoding(t: CompletedTree) -> bytes:
    """Serialize a completed tree to its canonical byte string."""
    k = t.arity
    mask_len = (k + 7) // 8
    out = bytearray()
    _write_varint(out, k)

    def walk(node: Node) -> None:
        _write_varint(out, node.label)
        mask = 0
        for i, slot in enumerate(node.slots):
            if isinstance(slot, Node):
                mask |= 1 << i
        out.extend(mask.to_bytes(mask_len, "little"))
        for slot in node.slots:
            if isinstance(slot, Node):
                walk(slot)

    walk(t.root)
    return bytes(out)


def decode_encoding(data: bytes) -> CompletedTree:
    """Inverse of ``canonical_encoding``."""
    k, pos = _read_varint(data, 0)
    if k < 2:
        raise ValueError(f"encoded arity {k} is invalid")
    mask_len = (k + 7) // 8

    def read_node(pos: int) -> tuple[Node, int]:
        label, pos = _read_varint(data, pos)
        if pos + mask_len > len(data):
            raise ValueError("truncated encoding: mask runs past end")
        mask = int.from_bytes(data[pos : pos + mask_len], "little")
        pos += mask_len
        if mask >> k:
            raise ValueError("mask has bits beyond the arity")
        slots: list[Slot] = []
        for i in range(k):
            if mask & (1 << i):
                child, pos = read_node(pos)
                slots.append(child)
            else:
                slots.append(BULLET)
        return Node(label, tuple(slots)), pos

    root, pos = read_node(pos)
    if pos != len(data):
        raise ValueError(f"{len(data) - pos} trailing bytes after encoding")
    return CompletedTree(k, root)


# --------------------------------------------------------------------------
# Text renderings (CLI output formats)
# --------------------------------------------------------------------------


def render_indented(tree: Union[LabeledTree, CompletedTree]) -> str:
    """Indented preorder listing; one line per slot, bullets shown as '*'."""
    root = tree.root
    lines = [str(root.label)]

    def walk(node: Node, depth: int) -> None:
        pad = "  " * depth
        for i, slot in enumerate(node.slots):
            if isinstance(slot, Node):
                lines.append(f"{pad}{i}: {slot.label}")
                walk(slot, depth + 1)
            elif slot is BULLET:
                lines.append(f"{pad}{i}: *")

    walk(root, 1)
    return "\n".join(lines) + "\n"


def _path_str(path: Path) -> str:
    return "r" if not path else "r." + ".".join(str(i) for i in path)


def render_graph(tree: Union[LabeledTree, CompletedTree]) -> str:
    """One labeled node per line: ``parent_path slot label`` ('-' for the root)."""
    lines = []
    for path, node in iter_nodes(tree.root):
        if not path:
            lines.append(f"- - {node.label}")
        else:
            lines.append(f"{_path_str(path[:-1])} {path[-1]} {node.label}")
    return "\n".join(lines) + "\n"
