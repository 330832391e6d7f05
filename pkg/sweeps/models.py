from django.db import models

from headers.header import Engine, Mode


class SweepRun(models.Model):
    STATUS_CHOICES = (
        ('running', 'Running'),
        ('completed', 'Completed'),
        ('failed', 'Failed'),
    )

    corpus = models.CharField(max_length=500)
    family = models.CharField(max_length=20)
    grid = models.JSONField(default=list, blank=True)
    engine = models.CharField(max_length=20, choices=Engine.choices, default=Engine.HUFFMAN)
    mode = models.CharField(max_length=20, choices=Mode.choices, default=Mode.EXACT)
    fast_bits = models.PositiveIntegerField(null=True, blank=True)
    strip_punct = models.BooleanField(default=False)
    schema_version = models.PositiveSmallIntegerField(default=1)
    status = models.CharField(max_length=20, choices=STATUS_CHOICES, default='running')
    started_at = models.DateTimeField(auto_now_add=True)
    finished_at = models.DateTimeField(null=True, blank=True)

    class Meta:
        ordering = ['-started_at']

    def __str__(self):
        return f'{self.family} sweep over {self.corpus} | {self.engine} | {self.status}'


class SweepResult(models.Model):
    run = models.ForeignKey(SweepRun, on_delete=models.CASCADE, related_name='results')
    file = models.CharField(max_length=500)
    method = models.CharField(max_length=20)
    family = models.CharField(max_length=20)
    param = models.CharField(max_length=64, blank=True)
    n = models.BigIntegerField(null=True, blank=True)
    net_bits = models.BigIntegerField(null=True, blank=True)
    header_bits = models.BigIntegerField(null=True, blank=True)
    net_ratio = models.FloatField(null=True, blank=True)
    combined_ratio = models.FloatField(null=True, blank=True)
    runtime = models.FloatField(default=0)
    error = models.TextField(blank=True)

    class Meta:
        ordering = ['id']

    def __str__(self):
        return f'{self.file} {self.method} {self.family}:{self.param} -> {self.net_ratio}'
