"""Follow-up question trees and the per-item status vocabulary.

When a reviewer marks an essential attribute absent, a diagnostic tree of
follow-up prompts takes over and reduces the item to one of five
statuses.  Venues get a canonical default tree; individual items may name
a custom tree in their standard's front matter.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

from .errors import TreeError


class VenueKind(Enum):
    JOURNAL = "journal"
    CONFERENCE = "conference"


class StatusCode(Enum):
    """Outcome of one essential item, ordered from best to worst."""

    MET = "met"
    JUSTIFIED_DEVIATION = "justified_deviation"
    FIXABLE_MINOR = "fixable_minor"
    FIXABLE_REVISION = "fixable_revision"
    FATAL = "fatal"


STATUS_ORDER: Mapping[StatusCode, int] = {
    StatusCode.MET: 0,
    StatusCode.JUSTIFIED_DEVIATION: 1,
    StatusCode.FIXABLE_MINOR: 2,
    StatusCode.FIXABLE_REVISION: 3,
    StatusCode.FATAL: 4,
}


def worst_status(statuses: Iterable[StatusCode]) -> StatusCode:
    return max(statuses, key=STATUS_ORDER.__getitem__)


@dataclass(frozen=True)
class ItemStatus:
    """Final status of one item plus any text captured on the way there."""

    code: StatusCode
    note: str = ""

    def __post_init__(self) -> None:
        if self.code is StatusCode.MET and self.note:
            raise ValueError("a met item carries no note")


class AnswerKind(Enum):
    YES_NO = "yes_no"
    CHOICE = "choice"
    FREE_TEXT = "free_text"


# Free-text answers justify a criticism or describe a needed fix; they are
# meant to be brief, so the engine bounds them.
MAX_CAPTURE_LENGTH = 2000

# Node ids reserved for the synthetic per-item root grafted on at session
# start (the item's own yes/no prompt and its "yes" leaf).
RESERVED_NODE_IDS = frozenset({"root", "met"})


@dataclass(frozen=True)
class FollowUpNode:
    """One prompt in a tree, or a leaf carrying a status.

    A node is a leaf iff it has no outgoing edges; then ``leaf_status`` is
    set.  Free-text nodes have exactly one outgoing edge (the answer text
    does not branch) and may capture the reviewer's words into the item
    status note.
    """

    node_id: str
    prompt: str = ""
    answer_kind: AnswerKind = AnswerKind.YES_NO
    edges: Mapping[str, str] = None  # type: ignore[assignment]
    leaf_status: StatusCode | None = None
    capture_text: bool = False

    def __post_init__(self) -> None:
        if self.edges is None:
            object.__setattr__(self, "edges", {})

    @property
    def is_leaf(self) -> bool:
        return not self.edges


@dataclass(frozen=True)
class FollowUpTree:
    tree_id: str
    root: str
    nodes: Mapping[str, FollowUpNode]

    def node(self, node_id: str) -> FollowUpNode:
        return self.nodes[node_id]

    def decision_nodes(self) -> tuple[FollowUpNode, ...]:
        return tuple(
            n for n in self.nodes.values() if not n.is_leaf and n.answer_kind is not AnswerKind.FREE_TEXT
        )

    def free_text_nodes(self) -> tuple[FollowUpNode, ...]:
        return tuple(
            n for n in self.nodes.values() if not n.is_leaf and n.answer_kind is AnswerKind.FREE_TEXT
        )

    def leaves(self) -> tuple[FollowUpNode, ...]:
        return tuple(n for n in self.nodes.values() if n.is_leaf)


def validate_tree(tree: FollowUpTree) -> None:
    """Raise TreeError unless the tree is well formed.

    Well formed: root resolves, every edge resolves, no node reachable
    twice along any path (acyclic), every leaf carries a status, free-text
    nodes have exactly one edge, no reserved node ids.
    """
    if tree.root not in tree.nodes:
        raise TreeError(f"tree {tree.tree_id!r}: root {tree.root!r} does not resolve")
    for node in tree.nodes.values():
        if node.node_id in RESERVED_NODE_IDS:
            raise TreeError(f"tree {tree.tree_id!r}: node id {node.node_id!r} is reserved")
        if node.is_leaf:
            if node.leaf_status is None:
                raise TreeError(f"tree {tree.tree_id!r}: leaf {node.node_id!r} has no status")
        else:
            if node.leaf_status is not None:
                raise TreeError(
                    f"tree {tree.tree_id!r}: node {node.node_id!r} has both edges and a leaf status"
                )
            if node.answer_kind is AnswerKind.FREE_TEXT and len(node.edges) != 1:
                raise TreeError(
                    f"tree {tree.tree_id!r}: free-text node {node.node_id!r} must have exactly one edge"
                )
            if node.answer_kind is AnswerKind.YES_NO and set(node.edges) != {"yes", "no"}:
                raise TreeError(
                    f"tree {tree.tree_id!r}: yes/no node {node.node_id!r} needs yes and no edges"
                )
            for answer, target in node.edges.items():
                if target not in tree.nodes:
                    raise TreeError(
                        f"tree {tree.tree_id!r}: edge {node.node_id!r}[{answer!r}] -> "
                        f"{target!r} does not resolve"
                    )
    _check_acyclic(tree)


def _check_acyclic(tree: FollowUpTree) -> None:
    state: dict[str, int] = {}  # 1 = on stack, 2 = done

    def visit(node_id: str) -> None:
        if state.get(node_id) == 1:
            raise TreeError(f"tree {tree.tree_id!r}: cycle through {node_id!r}")
        if state.get(node_id) == 2:
            return
        state[node_id] = 1
        for target in tree.nodes[node_id].edges.values():
            visit(target)
        state[node_id] = 2

    visit(tree.root)


def _yes_no(node_id: str, prompt: str, yes: str, no: str) -> FollowUpNode:
    return FollowUpNode(node_id, prompt, AnswerKind.YES_NO, {"yes": yes, "no": no})


def _capture(node_id: str, prompt: str, target: str) -> FollowUpNode:
    return FollowUpNode(
        node_id, prompt, AnswerKind.FREE_TEXT, {"text": target}, capture_text=True
    )


def _leaf(node_id: str, status: StatusCode) -> FollowUpNode:
    return FollowUpNode(node_id, edges={}, leaf_status=status)


def default_tree(venue_kind: VenueKind) -> FollowUpTree:
    """The canonical follow-up tree shown once an essential item is marked
    absent.

    Both variants first ask whether the deviation is justified in context,
    then whether the problem is easily fixed in the camera-ready copy.
    The journal variant adds a third gate (fixable without repeating data
    collection) leading to an invited revision; single-stage conference
    review goes straight to a fatal outcome instead.
    """
    nodes = [
        _yes_no("justified", "Is this deviation justified in the context of this study?",
                yes="ok", no="camera_ready"),
        _leaf("ok", StatusCode.JUSTIFIED_DEVIATION),
        _leaf("minor", StatusCode.FIXABLE_MINOR),
        _leaf("fatal", StatusCode.FATAL),
        _capture("fatal_why", "Briefly state why this cannot be fixed.", "fatal"),
    ]
    if venue_kind is VenueKind.JOURNAL:
        nodes += [
            _yes_no("camera_ready", "Would this problem be easy to fix in the camera-ready copy?",
                    yes="minor", no="revisable"),
            _yes_no("revisable", "Could this be fixed without repeating data collection?",
                    yes="fix_what", no="fatal_why"),
            _capture("fix_what", "State exactly what is incorrect or missing.", "revision"),
            _leaf("revision", StatusCode.FIXABLE_REVISION),
        ]
        tree_id = "default-journal"
    else:
        nodes += [
            _yes_no("camera_ready", "Could this be fixed by modest editing alone in the camera-ready copy?",
                    yes="minor", no="fatal_why"),
        ]
        tree_id = "default-conference"
    tree = FollowUpTree(tree_id, "justified", {n.node_id: n for n in nodes})
    validate_tree(tree)
    return tree


# -- tree definition files --------------------------------------------------

_STATUS_NAMES = {code.value: code for code in StatusCode}
_KIND_NAMES = {kind.value: kind for kind in AnswerKind}


def parse_tree(text: str, source: str = "<tree>") -> FollowUpTree:
    """Parse a tree definition file.

    INI-style sections: a ``[tree]`` header naming id and root, then one
    ``[node <id>]`` section per node with ``prompt``, ``kind`` and either
    edge keys or a leaf ``status``::

        [tree]
        id = random-assignment
        root = justified

        [node justified]
        prompt = Is there a reasonable justification ...?
        kind = yes_no
        yes = ok
        no = next

        [node ok]
        status = justified_deviation

    Free-text nodes use ``kind = free_text`` with a single ``next`` edge
    and an optional ``capture = true``.
    """
    cp = configparser.ConfigParser()
    cp.optionxform = str  # keep edge answer keys as written
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise TreeError(f"{source}: {exc}") from None
    if "tree" not in cp:
        raise TreeError(f"{source}: missing [tree] section")
    head = cp["tree"]
    tree_id = head.get("id", "").strip()
    root = head.get("root", "").strip()
    if not tree_id or not root:
        raise TreeError(f"{source}: [tree] must set id and root")

    nodes: dict[str, FollowUpNode] = {}
    for section in cp.sections():
        if section == "tree":
            continue
        if not section.startswith("node "):
            raise TreeError(f"{source}: unexpected section [{section}]")
        node_id = section[5:].strip()
        nodes[node_id] = _parse_node(node_id, cp[section], source)

    tree = FollowUpTree(tree_id, root, nodes)
    validate_tree(tree)
    return tree


def _parse_node(node_id: str, section, source: str) -> FollowUpNode:
    raw_status = section.get("status", "").strip()
    if raw_status:
        if raw_status not in _STATUS_NAMES:
            raise TreeError(f"{source}: node {node_id!r} has unknown status {raw_status!r}")
        return FollowUpNode(node_id, edges={}, leaf_status=_STATUS_NAMES[raw_status])

    raw_kind = section.get("kind", "yes_no").strip()
    if raw_kind not in _KIND_NAMES:
        raise TreeError(f"{source}: node {node_id!r} has unknown kind {raw_kind!r}")
    kind = _KIND_NAMES[raw_kind]
    prompt = section.get("prompt", "").strip()
    capture = section.getboolean("capture", fallback=False)

    edges: dict[str, str] = {}
    if kind is AnswerKind.FREE_TEXT:
        target = section.get("next", "").strip()
        if target:
            edges["text"] = target
    else:
        for key in section:
            if key in ("prompt", "kind", "capture", "status", "next"):
                continue
            edges[key] = section.get(key).strip()
    return FollowUpNode(node_id, prompt, kind, edges, capture_text=capture)


def load_tree(path: str | Path) -> FollowUpTree:
    p = Path(path)
    return parse_tree(p.read_text(encoding="utf-8"), source=str(p))


def tree_to_json(tree: FollowUpTree) -> dict:
    """Structured form of a tree, embedded in session logs for replay."""
    return {
        "tree_id": tree.tree_id,
        "root": tree.root,
        "nodes": [
            {
                "node_id": node.node_id,
                "prompt": node.prompt,
                "kind": node.answer_kind.value,
                "edges": dict(node.edges),
                "leaf_status": node.leaf_status.value if node.leaf_status else None,
                "capture": node.capture_text,
            }
            for node in tree.nodes.values()
        ],
    }


def tree_from_json(doc: dict) -> FollowUpTree:
    nodes = {}
    for entry in doc["nodes"]:
        raw_status = entry.get("leaf_status")
        nodes[entry["node_id"]] = FollowUpNode(
            node_id=entry["node_id"],
            prompt=entry.get("prompt", ""),
            answer_kind=AnswerKind(entry.get("kind", "yes_no")),
            edges=dict(entry.get("edges", {})),
            leaf_status=StatusCode(raw_status) if raw_status else None,
            capture_text=bool(entry.get("capture", False)),
        )
    tree = FollowUpTree(doc["tree_id"], doc["root"], nodes)
    validate_tree(tree)
    return tree
