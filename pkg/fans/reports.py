"""Structured verification results.

Every check returns a :class:`Report`. Reports nest: a check that runs other
checks (the homology-manifold recursion, the Kähler package) keeps their
reports as children. Rendering goes through Django REST framework so that the
on-disk format is the same JSON the serializers describe.
"""
import hashlib
from dataclasses import dataclass, field

from rest_framework.renderers import JSONRenderer

PASS = 'pass'
FAIL = 'fail'
NOT_CERTIFIED = 'not_certified'

STATUS_CHOICES = [
    (PASS, 'Pass'),
    (FAIL, 'Fail'),
    (NOT_CERTIFIED, 'Not certified'),
]


@dataclass
class Report:
    check: str
    status: str = PASS
    witnesses: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    children: list = field(default_factory=list)

    @property
    def passed(self):
        return self.status == PASS

    def fail(self, note=None, **witnesses):
        self.status = FAIL
        self.witnesses.update(witnesses)
        if note:
            self.notes.append(note)
        return self

    def add(self, child):
        """Attach a sub-report and fold its status into this one."""
        self.children.append(child)
        self.status = worst(self.status, child.status)
        return child

    def __bool__(self):
        return self.passed


def worst(*statuses):
    if FAIL in statuses:
        return FAIL
    if NOT_CERTIFIED in statuses:
        return NOT_CERTIFIED
    return PASS


@dataclass
class ReportFile:
    command: str
    digest: str
    report: Report

    @property
    def status(self):
        return self.report.status


def digest_inputs(*chunks):
    sha = hashlib.sha256()
    for chunk in chunks:
        if isinstance(chunk, str):
            chunk = chunk.encode()
        sha.update(chunk)
    return sha.hexdigest()


def render(report_file):
    from .serializers import ReportFileSerializer

    data = ReportFileSerializer(report_file).data
    return JSONRenderer().render(data, renderer_context={'indent': 2}).decode() + '\n'
