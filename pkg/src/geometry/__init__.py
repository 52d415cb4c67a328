"""Charted homogeneous models, orbits through the base point and their invariants"""
from src.geometry.checks import ModelCheckReport, check_model
from src.geometry.metrics import ChartMetric, WarpedProductMetric, flat_metric, levi_civita_symbols
from src.geometry.model import ChartedHomSpace, FieldKind, FieldTag
from src.geometry.orbit import EvaluationMap, OrbitData, build_orbit, identify_m_with_tangent
