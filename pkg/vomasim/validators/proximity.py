"""Proximity reports of spatial VO agents."""

from typing import Dict, Optional

from ..data_structure.models import ProximityReport
from ..engine.world import World, neighbors_within
from .exceptions import NonSpatialVoAgent

__all__ = ['proximity_report']


def proximity_report(
    vo,
    view: World,
    tick: int,
    predicate=None,
    var: Optional[str] = None,
    vo_agents: Optional[Dict] = None,
) -> ProximityReport:
    """Agents inside a VO agent's radius, each optionally checked against a predicate.

    Args:
        vo (VOAgentDef): spatial VO agent.
        view (World): read-only world view.
        tick (int): tick of the view.
        predicate (Optional[Expr], optional): boolean expression evaluated with each
            member bound to ``var`` (or implicitly, if ``var`` is None). Defaults to None.
        var (Optional[str], optional): binder name of ``predicate``. Defaults to None.
        vo_agents (Optional[Dict[str, VOAgentDef]], optional): VO agents visible to
            ``predicate``. Defaults to ``vo`` alone.

    Returns:
        ProximityReport: members ascending by id; ``outcomes`` maps member id to the
            predicate value when a predicate is given.

    Raises:
        NonSpatialVoAgent: if ``vo`` is global.
        EvalError: if the predicate cannot be evaluated for some member.
    """
    if not vo.is_spatial:
        raise NonSpatialVoAgent(vo.name)
    placement = vo.placement
    members = neighbors_within(view, (placement.x, placement.y), placement.radius, vo.kind_filter)
    if predicate is None:
        return ProximityReport(vo_agent=vo.name, tick=tick, members=members)

    from ..vomas.evaluator import EvalContext, eval_expr

    ctx = EvalContext(view, tick, vo_agents if vo_agents is not None else {vo.name: vo})
    outcomes = {}
    for agent_id in members:
        ctx.bind(var, view.get(agent_id))
        try:
            outcomes[agent_id] = eval_expr(predicate, ctx) is True
        finally:
            ctx.unbind()
    return ProximityReport(vo_agent=vo.name, tick=tick, members=members, outcomes=outcomes)
