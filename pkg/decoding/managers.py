# decoding/managers.py
from datetime import timedelta

from django.db import models
from django.utils import timezone


class EvaluationRunQuerySet(models.QuerySet):
    """Custom queryset for stored pseudo-online evaluations"""

    def recent(self, days=7):
        """Runs recorded within the last ``days`` days"""
        return self.filter(created_at__gte=timezone.now() - timedelta(days=days))

    def for_dataset(self, sha256):
        return self.filter(dataset_sha256=sha256)

    def multiclass(self):
        return self.filter(n_classes__gt=2)

    def binary(self):
        return self.filter(n_classes=2)

    def controls(self):
        """Runs whose model was trained on shuffled labels"""
        return self.filter(shuffle_labels=True)

    def summary(self):
        """Mean and spread of accuracy per class count"""
        return list(
            self.values('n_classes')
            .annotate(
                runs=models.Count('id'),
                mean_accuracy=models.Avg('accuracy'),
                min_accuracy=models.Min('accuracy'),
                max_accuracy=models.Max('accuracy'),
            )
            .order_by('-n_classes')
        )
