"""
Forms for the orbits module.
Validates analysis options collected from flags, environment and input files.
"""

from django import forms

from .arith import MAX_THRESHOLD, MIN_PRECISION
from .linalg import TIER_CHOICES, BackendConfig


# ============================================================================
# Analysis Options
# ============================================================================

class AnalysisOptionsForm(forms.Form):
    """Numerical and sampling options of one command invocation"""

    TIER_CHOICES = [(tier, tier) for tier in TIER_CHOICES]

    precision = forms.IntegerField(
        min_value=MIN_PRECISION,
        help_text='Working precision in decimal digits.'
    )
    tau = forms.FloatField(
        required=False,
        help_text='Acceptance threshold for numeric integer relations.'
    )
    tier = forms.ChoiceField(choices=TIER_CHOICES)
    strict_exact = forms.BooleanField(required=False)
    word_length = forms.IntegerField(min_value=1)
    radius = forms.FloatField(required=False)
    radius_factor = forms.FloatField(required=False)
    min_points = forms.IntegerField(min_value=1)

    def clean_tau(self):
        tau = self.cleaned_data.get('tau')
        if tau is not None and not 0 < tau < MAX_THRESHOLD:
            raise forms.ValidationError('tau must lie strictly between 0 and 1e-5.')
        return tau

    def clean_radius(self):
        radius = self.cleaned_data.get('radius')
        if radius is not None and radius <= 0:
            raise forms.ValidationError('radius must be positive.')
        return radius

    def clean_radius_factor(self):
        factor = self.cleaned_data.get('radius_factor')
        if factor is not None and factor <= 1:
            raise forms.ValidationError('radius factor must exceed 1.')
        return factor

    def clean(self):
        cleaned_data = super().clean()
        if cleaned_data.get('strict_exact'):
            cleaned_data['tier'] = 'exact'
        return cleaned_data

    def to_config(self):
        data = self.cleaned_data
        return BackendConfig(precision=data['precision'], tau=data['tau'], tier=data['tier'])

    def error_text(self):
        return '; '.join(
            f'{name}: {" ".join(messages)}' for name, messages in self.errors.items()
        )
