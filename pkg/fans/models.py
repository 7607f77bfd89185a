from django.db import models

from .reports import STATUS_CHOICES


class VerificationRun(models.Model):
    command = models.CharField(max_length=32)
    digest = models.CharField(max_length=64, db_index=True)  # sha256 of every input file
    status = models.CharField(max_length=20, choices=STATUS_CHOICES)
    report = models.JSONField(default=dict)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at', '-id']

    def __str__(self):
        return f"{self.command} {self.digest[:12]}: {self.status}"
