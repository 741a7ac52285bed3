from .system import BundleLift, ManifoldPath, PathChartSystem, PathRep
from .charts import (
    chart_map, lift_chart_map, reconstruct, lift_reconstruct, assemble, disassemble,
    evaluate_path, evaluate_lift, linearized_reconstruct, transported_endpoint, constant_rep
)
from .transition import (
    TransitionCell, TransitionPlan, plan_transition, apply_transition, transition_rep, round_trip_amplification
)
from .margin import OpennessCertificate, openness_certificate, openness_margin, in_neighborhood
from .cover import find_chart_system
