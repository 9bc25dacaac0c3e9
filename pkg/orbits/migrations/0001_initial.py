# Generated by Django 4.2 on 2026-10-19 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='AnalysisRecord',
            fields=[
                ('id', models.AutoField(primary_key=True, serialize=False)),
                ('command', models.CharField(choices=[('analyze', 'Orbit analysis'), ('normal_form', 'Normal form'), ('closure', 'Closure decomposition'), ('sample', 'Orbit sampling')], db_index=True, max_length=20)),
                ('input_digest', models.CharField(db_index=True, max_length=80)),
                ('vector_name', models.CharField(blank=True, default='', max_length=100)),
                ('order', models.PositiveIntegerField(blank=True, null=True)),
                ('classification', models.CharField(blank=True, default='', max_length=50)),
                ('tier', models.CharField(choices=[('exact', 'Exact'), ('numeric', 'Numeric'), ('heuristic', 'Heuristic')], default='exact', max_length=20)),
                ('report', models.TextField(blank=True, default='')),
                ('metadata', models.JSONField(blank=True, default=dict)),
                ('created_at', models.DateTimeField(auto_now_add=True, db_index=True)),
            ],
            options={
                'db_table': 'orbits_analysis_record',
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['input_digest', 'vector_name'], name='orbits_record_digest_idx')],
            },
        ),
    ]
