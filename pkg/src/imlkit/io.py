"""JSON model/frame format.

    {"states": ["a", "b"], "le": [["a", "b"]], "le_closed": true,
     "r": [["a", "b"]], "val": {"p": ["b"]}}

`le_closed: true` asks for the reflexive-transitive closure of `le`; otherwise
`le` must already be a preorder. A valuation that is not upward closed is an
error unless `val_upclose: true`.
"""

import json
from pathlib import Path

from .errors import FormatError, NotPreorder, NotUpClosed
from .structures import Frame, Model, bits, from_pairs, is_reflexive, is_transitive, rt_closure, up_closure


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise FormatError("%s: invalid JSON (%s)" % (path, e)) from None


def _pairs(doc, key, index):
    out = []
    for pair in doc.get(key, []):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise FormatError("%s: expected a list of [state, state] pairs" % key)
        try:
            out.append((index[pair[0]], index[pair[1]]))
        except KeyError as e:
            raise FormatError("%s mentions unknown state %s" % (key, e)) from None
    return out


def frame_from_json(doc):
    states = doc.get("states")
    if not isinstance(states, list) or not states:
        raise FormatError("'states' must be a nonempty list")
    names = [str(s) for s in states]
    if len(set(names)) != len(names):
        raise FormatError("duplicate state names")
    index = {s: i for i, s in enumerate(states)}
    index.update({str(s): i for i, s in enumerate(states)})
    n = len(names)
    le = from_pairs(n, _pairs(doc, "le", index))
    if doc.get("le_closed", False):
        le = rt_closure(le)
    elif not (is_reflexive(le) and is_transitive(le)):
        raise NotPreorder("'le' is not a preorder (set \"le_closed\": true to close it)")
    r = from_pairs(n, _pairs(doc, "r", index))
    return Frame(n, le, r, tuple(names))


def model_from_json(doc):
    frame = frame_from_json(doc)
    index = {s: i for i, s in enumerate(frame.names)}
    val = {}
    for p, xs in (doc.get("val") or {}).items():
        m = 0
        for s in xs:
            if str(s) not in index:
                raise FormatError("val[%s] mentions unknown state %r" % (p, s))
            m |= 1 << index[str(s)]
        if doc.get("val_upclose", False):
            m = up_closure(frame, m)
        elif up_closure(frame, m) != m:
            raise NotUpClosed("V(%s) is not upward closed (set \"val_upclose\": true to close it)" % p)
        val[p] = m
    return Model(frame, val)


def load_model(path):
    return model_from_json(read_json(path))


def load_frame(path):
    return frame_from_json(read_json(path))


def frame_to_json(f):
    nm = f.names
    return {
        "states": list(nm),
        "le": [[nm[i], nm[j]] for i in range(f.n) for j in bits(f.le[i])],
        "le_closed": False,
        "r": [[nm[i], nm[j]] for i in range(f.n) for j in bits(f.r[i])],
    }


def model_to_json(m):
    doc = frame_to_json(m.frame)
    nm = m.frame.names
    doc["val"] = {p: [nm[s] for s in bits(x)] for p, x in sorted(m.val.items())}
    return doc


def dump(doc, path=None):
    text = json.dumps(doc, indent=2, ensure_ascii=False)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text
