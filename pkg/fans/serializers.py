from fractions import Fraction

from rest_framework import serializers

from .exceptions import InvalidFanError, InvalidFunctionError, MatroidError
from .fan_core import validate_fan
from .kahler import ConewiseLinearFunction
from .matroid import validate_matroid
from .models import VerificationRun
from .reports import STATUS_CHOICES


def plain(value):
    """Reduce witnesses to JSON primitives; rationals become 'p/q' strings."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [plain(v) for v in items]
    return value


class FractionField(serializers.Field):
    default_error_messages = {
        'invalid': 'A rational number such as 3 or -2/5 is required.',
    }

    def to_internal_value(self, data):
        try:
            return Fraction(str(data).strip())
        except (ValueError, ZeroDivisionError):
            self.fail('invalid')

    def to_representation(self, value):
        return str(value)


class WitnessField(serializers.Field):
    def to_representation(self, value):
        return plain(value)


class FanFileSerializer(serializers.Serializer):
    lattice_rank = serializers.IntegerField(min_value=0)
    rays = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField(), allow_empty=True),
        allow_empty=True,
    )
    ray_labels = serializers.ListField(child=serializers.CharField(), required=False)
    maximal_cones = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField(min_value=0), allow_empty=True),
    )
    weights = serializers.ListField(child=serializers.IntegerField(), required=False)
    values = serializers.ListField(child=FractionField(), required=False)

    def validate_weights(self, value):
        if any(w == 0 for w in value):
            raise serializers.ValidationError('Weights must be nonzero integers.')
        return value

    def validate(self, attrs):
        try:
            attrs['fan'] = validate_fan(attrs)
        except InvalidFanError as exc:
            raise serializers.ValidationError({'fan': str(exc)})
        if 'values' in attrs:
            try:
                attrs['function'] = ConewiseLinearFunction(attrs['fan'], tuple(attrs['values']))
            except InvalidFunctionError as exc:
                raise serializers.ValidationError({'values': str(exc)})
        return attrs

    def create(self, validated_data):
        return validated_data['fan']


class FunctionFileSerializer(serializers.Serializer):
    """Values of a conewise linear function; needs the fan in the context."""
    values = serializers.ListField(child=FractionField(), allow_empty=True)

    def validate(self, attrs):
        try:
            attrs['function'] = ConewiseLinearFunction(self.context['fan'], tuple(attrs['values']))
        except InvalidFunctionError as exc:
            raise serializers.ValidationError({'values': str(exc)})
        return attrs

    def create(self, validated_data):
        return validated_data['function']


class MatroidFileSerializer(serializers.Serializer):
    ground_set_size = serializers.IntegerField(min_value=0)
    bases = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField(min_value=0), allow_empty=True),
    )

    def validate(self, attrs):
        try:
            attrs['matroid'] = validate_matroid(attrs['ground_set_size'], attrs['bases'])
        except MatroidError as exc:
            raise serializers.ValidationError({'bases': str(exc)})
        return attrs

    def create(self, validated_data):
        return validated_data['matroid']


class ReportSerializer(serializers.Serializer):
    check = serializers.CharField()
    status = serializers.ChoiceField(choices=STATUS_CHOICES)
    witnesses = WitnessField()
    notes = serializers.ListField(child=serializers.CharField())
    children = serializers.SerializerMethodField()

    def get_children(self, obj):
        return ReportSerializer(obj.children, many=True).data


class ReportFileSerializer(serializers.Serializer):
    command = serializers.CharField()
    digest = serializers.CharField()
    status = serializers.ChoiceField(choices=STATUS_CHOICES)
    report = ReportSerializer()


class VerificationRunSerializer(serializers.ModelSerializer):
    class Meta:
        model = VerificationRun
        fields = ('id', 'command', 'digest', 'status', 'report', 'created_at')
        read_only_fields = fields
