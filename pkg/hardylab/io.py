import json, csv, io
from .errors import ValidationError
from .weight import PowerPiece, Weight, StepWeight
from .discrete import WeightedSeq
from .param import parse_number

PIECE_FIELDS = ("lo", "hi", "coeff", "exp")

def weight_from_dict(d):
    """Builds a weight from ``{"pieces": [{"lo": .., "hi": .., "coeff": .., "exp": ..}, ...]}``.

    A :class:`StepWeight` is returned when every exponent is 0.
    """
    if not isinstance(d, dict) or not isinstance(d.get("pieces", None), list):
        raise ValidationError("A weight document must be an object with a list 'pieces'")
    pieces = []
    for i, entry in enumerate(d["pieces"]):
        if not isinstance(entry, dict):
            raise ValidationError(f"Piece {i} must be an object")
        missing = [k for k in PIECE_FIELDS if not k in entry]
        if len(missing) > 0:
            raise ValidationError(f"Piece {i} is missing the fields {missing}")
        pieces.append(PowerPiece(*[parse_number(entry[k]) for k in PIECE_FIELDS]))
    if all(piece.exp == 0.0 for piece in pieces) and len(pieces) > 0:
        return StepWeight(tuple(pieces))
    return Weight(tuple(pieces))

def weight_to_dict(w):
    return {"pieces": [{k: getattr(piece, k) for k in PIECE_FIELDS} for piece in w.pieces]}

def load_weight(path):
    with open(path, "r") as f:
        try:
            d = json.load(f)
        except json.JSONDecodeError as e:
            raise ValidationError(f"Invalid weight file '{path}': {e}")
    return weight_from_dict(d)

def save_weight(w, path):
    with open(path, "w") as f:
        json.dump(weight_to_dict(w), f, indent=2)

def sequence_from_rows(rows):
    rows = list(rows)
    if len(rows) == 0 or [x.strip() for x in rows[0]] != ["lambda", "a"]:
        raise ValidationError("A sequence file must start with the header 'lambda,a'")
    lam, a = [], []
    for n, row in enumerate(rows[1:], start=1):
        if len(row) == 0 or all(x.strip() == "" for x in row):
            continue
        if len(row) != 2:
            raise ValidationError(f"Row {n} must have two columns, got {len(row)}")
        lam.append(parse_number(row[0]))
        a.append(parse_number(row[1]))
    return WeightedSeq(tuple(lam), tuple(a))

def load_sequence(path):
    """Reads a weighted sequence from a CSV file with the header ``lambda,a`` and one row per term."""
    with open(path, "r", newline="") as f:
        return sequence_from_rows(csv.reader(f))

def sequence_to_csv(s):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["lambda", "a"])
    for lam, a in zip(s.lam, s.a):
        writer.writerow([repr(lam), repr(a)])
    return out.getvalue()

def save_sequence(s, path):
    with open(path, "w", newline="") as f:
        f.write(sequence_to_csv(s))

def scan_to_csv(rows):
    """Writes limit scan rows as CSV with the columns ``k, a, L, margin``."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["k", "a", "L", "margin"])
    for row in rows:
        writer.writerow([row.k, repr(row.a), repr(row.L), repr(row.margin)])
    return out.getvalue()
