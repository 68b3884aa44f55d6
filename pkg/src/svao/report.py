"""Check results shared by the axiom checkers and the CLI."""

PASS = "pass"
FAIL = "fail"
NOT_EVALUABLE = "not-evaluable"


class Check:
    __slots__ = ("name", "status", "witness", "defect", "note")

    def __init__(self, name, status, witness=None, defect=None, note=None):
        self.name = name
        self.status = status
        self.witness = witness
        self.defect = defect
        self.note = note

    @property
    def ok(self):
        return self.status == PASS

    def as_dict(self):
        d = {"name": self.name, "status": self.status}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.defect is not None:
            d["defect"] = self.defect
        if self.note is not None:
            d["note"] = self.note
        return d

    def __repr__(self):
        return "Check(%s: %s%s)" % (self.name, self.status, "" if self.ok else " at %s" % (self.witness,))


def first_failure(name, cases, note=None):
    """Run (witness, defect_fn) pairs lazily; the first nonzero defect fails the check."""
    for witness, defect in cases:
        d = defect()
        if d is not None and not d.is_zero():
            return Check(name, FAIL, witness, d.render(), note)
    return Check(name, PASS, note=note)


def all_ok(checks):
    return all(c.ok for c in checks)


def by_name(checks):
    return {c.name: c for c in checks}
