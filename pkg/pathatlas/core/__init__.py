from .interval import Interval, Partition
from .step import StepCurve, regularize
from .regcurve import Curve, RegCurve, SmoothScalarRepar, make_curve
from .calculus import (
    evaluate, norm, primitive, derivative_split, integrate,
    concat, concat_many, restrict, linear_push, reparametrize_affine,
    lipschitz_bound, image_net, image_net_with_times, step_approximate
)
from .compose import check_image, compose_grid, refinement_grid, compose_smooth, change_of_variables, reparametrize
