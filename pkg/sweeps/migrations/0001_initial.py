# Generated by Django 5.2.5 on 2026-10-17 09:12

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SweepRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('corpus', models.CharField(max_length=500)),
                ('family', models.CharField(max_length=20)),
                ('grid', models.JSONField(blank=True, default=list)),
                ('engine', models.CharField(choices=[('huffman', 'Huffman'), ('arith', 'Arithmetic')], default='huffman', max_length=20)),
                ('mode', models.CharField(choices=[('exact', 'Exact'), ('streaming', 'Streaming')], default='exact', max_length=20)),
                ('fast_bits', models.PositiveIntegerField(blank=True, null=True)),
                ('strip_punct', models.BooleanField(default=False)),
                ('schema_version', models.PositiveSmallIntegerField(default=1)),
                ('status', models.CharField(choices=[('running', 'Running'), ('completed', 'Completed'), ('failed', 'Failed')], default='running', max_length=20)),
                ('started_at', models.DateTimeField(auto_now_add=True)),
                ('finished_at', models.DateTimeField(blank=True, null=True)),
            ],
            options={
                'ordering': ['-started_at'],
            },
        ),
        migrations.CreateModel(
            name='SweepResult',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('file', models.CharField(max_length=500)),
                ('method', models.CharField(max_length=20)),
                ('family', models.CharField(max_length=20)),
                ('param', models.CharField(blank=True, max_length=64)),
                ('n', models.BigIntegerField(blank=True, null=True)),
                ('net_bits', models.BigIntegerField(blank=True, null=True)),
                ('header_bits', models.BigIntegerField(blank=True, null=True)),
                ('net_ratio', models.FloatField(blank=True, null=True)),
                ('combined_ratio', models.FloatField(blank=True, null=True)),
                ('runtime', models.FloatField(default=0)),
                ('error', models.TextField(blank=True)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='results', to='sweeps.sweeprun')),
            ],
            options={
                'ordering': ['id'],
            },
        ),
    ]
