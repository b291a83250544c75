# Generated by Django 5.2 on 2026-10-18 10:00

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='EvaluationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('label', models.CharField(blank=True, help_text='Session name shown in history tables', max_length=255)),
                ('dataset_sha256', models.CharField(db_index=True, max_length=64)),
                ('model_sha256', models.CharField(blank=True, max_length=64)),
                ('n_classes', models.PositiveSmallIntegerField()),
                ('n_events', models.PositiveIntegerField()),
                ('accuracy', models.FloatField(blank=True, null=True)),
                ('chance_level', models.FloatField()),
                ('n_ties', models.PositiveIntegerField(default=0)),
                ('seed', models.BigIntegerField()),
                ('shuffle_labels', models.BooleanField(default=False)),
                ('report', models.JSONField(help_text='Full evaluation report')),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'verbose_name': 'Evaluation run',
                'verbose_name_plural': 'Evaluation runs',
                'ordering': ['-created_at', '-id'],
                'indexes': [models.Index(fields=['n_classes', 'created_at'], name='decoding_run_classes_idx')],
            },
        ),
    ]
