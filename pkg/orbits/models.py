from django.db import models


class AnalysisRecord(models.Model):
    """Archived result of one analysed vector"""

    class Command(models.TextChoices):
        ANALYZE = 'analyze', 'Orbit analysis'
        NORMAL_FORM = 'normal_form', 'Normal form'
        CLOSURE = 'closure', 'Closure decomposition'
        SAMPLE = 'sample', 'Orbit sampling'

    class Tier(models.TextChoices):
        EXACT = 'exact', 'Exact'
        NUMERIC = 'numeric', 'Numeric'
        HEURISTIC = 'heuristic', 'Heuristic'

    id = models.AutoField(primary_key=True)
    command = models.CharField(max_length=20, choices=Command.choices, db_index=True)
    input_digest = models.CharField(max_length=80, db_index=True)
    vector_name = models.CharField(max_length=100, blank=True, default='')
    order = models.PositiveIntegerField(null=True, blank=True)
    classification = models.CharField(max_length=50, blank=True, default='')
    tier = models.CharField(max_length=20, choices=Tier.choices, default=Tier.EXACT)
    report = models.TextField(blank=True, default='')
    metadata = models.JSONField(default=dict, blank=True)
    created_at = models.DateTimeField(auto_now_add=True, db_index=True)

    class Meta:
        db_table = 'orbits_analysis_record'
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['input_digest', 'vector_name'], name='orbits_record_digest_idx'),
        ]

    def __str__(self):
        if self.order is None:
            return f"{self.command} {self.input_digest[:15]}"
        return f"{self.vector_name}: order {self.order} ({self.classification})"
