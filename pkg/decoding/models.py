from django.db import models

from .managers import EvaluationRunQuerySet
from .reporting import format_percent


class EvaluationRun(models.Model):
    """One stored `bts eval --record` result"""

    label = models.CharField(max_length=255, blank=True, help_text="Session name shown in history tables")
    dataset_sha256 = models.CharField(max_length=64, db_index=True)
    model_sha256 = models.CharField(max_length=64, blank=True)
    n_classes = models.PositiveSmallIntegerField()
    n_events = models.PositiveIntegerField()
    accuracy = models.FloatField(null=True, blank=True)
    chance_level = models.FloatField()
    n_ties = models.PositiveIntegerField(default=0)
    seed = models.BigIntegerField()
    shuffle_labels = models.BooleanField(default=False)
    report = models.JSONField(help_text="Full evaluation report")

    created_at = models.DateTimeField(auto_now_add=True)

    objects = models.Manager.from_queryset(EvaluationRunQuerySet)()

    class Meta:
        verbose_name = "Evaluation run"
        verbose_name_plural = "Evaluation runs"
        ordering = ['-created_at', '-id']
        indexes = [
            models.Index(fields=['n_classes', 'created_at'], name='decoding_run_classes_idx'),
        ]

    def __str__(self):
        name = self.label or self.dataset_sha256[:12]
        return f"{name}: {self.n_classes}-class {format_percent(self.accuracy, 2)}"

    @classmethod
    def from_report(cls, report, label=''):
        return cls(
            label=label,
            dataset_sha256=report['dataset_sha256'] or '',
            model_sha256=report.get('model_sha256') or '',
            n_classes=report['n_classes'],
            n_events=report['n_events'],
            accuracy=report['accuracy'],
            chance_level=report['chance_level'],
            n_ties=report['n_ties'],
            seed=report['seed'],
            shuffle_labels=report['training']['shuffle_labels'],
            report=report,
        )

    @property
    def above_chance(self):
        return self.accuracy is not None and self.accuracy > self.chance_level
