"""Contract registry: the architecture's functions with their I/O categories.

Each row names one architecture function, the categories of data it consumes
and produces, and the single operation in this codebase realizing it. The
structural conformance test checks the registry against the frozen
module/function table and resolves every operation.
"""

from __future__ import annotations

import importlib
from dataclasses import dataclass


@dataclass(frozen=True)
class FunctionContract:
    name: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    operation: str      # dotted path, "module:qualname"

    def resolve(self):
        module_path, qualname = self.operation.split(":")
        obj = importlib.import_module(module_path)
        for part in qualname.split("."):
            obj = getattr(obj, part)
        return obj


REGISTRY: tuple[FunctionContract, ...] = (
    FunctionContract(
        "an_agent",
        ("stimuli", "state", "goal", "instruction", "query"),
        ("action", "state", "goal", "linguistic_data"),
        "autonet.host.agent:AgentInstance.run_step"),
    FunctionContract(
        "reactive_behavior", ("stimuli",), ("action_plan",),
        "autonet.reactive.pipeline:reactive_behavior"),
    FunctionContract(
        "situation_awareness", ("stimuli",), ("predictive_model",),
        "autonet.reactive.pipeline:situation_awareness"),
    FunctionContract(
        "perception", ("stimuli",), ("percept",),
        "autonet.reactive.percept:perceive"),
    FunctionContract(
        "reflection", ("percept",), ("predictive_model",),
        "autonet.reactive.model:reflect"),
    FunctionContract(
        "decision_making", ("predictive_model",), ("action_plan",),
        "autonet.reactive.pipeline:decision_making"),
    FunctionContract(
        "goal_management", ("new_goal", "predictive_model"), ("pursued_goal",),
        "autonet.reactive.goals:manage_goals"),
    FunctionContract(
        "planner", ("pursued_goal",), ("action_plan",),
        "autonet.reactive.planner:plan"),
    FunctionContract(
        "proactive_behavior", ("agent_state",), ("new_goal",),
        "autonet.proactive.pipeline:proactive_behavior"),
    FunctionContract(
        "self_awareness", ("agent_state",), ("meta_goal",),
        "autonet.proactive.pipeline:self_awareness"),
    FunctionContract(
        "agent_purpose", ("agent_state",), ("need",),
        "autonet.proactive.purpose:monitor_purpose"),
    FunctionContract(
        "intent_management", ("need", "feasibility_constraints"), ("meta_goal",),
        "autonet.proactive.choice:manage_intent"),
    FunctionContract(
        "choice_making", ("meta_goal",), ("new_goal",),
        "autonet.proactive.pipeline:choice_making"),
    FunctionContract(
        "metagoal_management", ("meta_goal",), ("goals",),
        "autonet.proactive.choice:expand_metagoal"),
    FunctionContract(
        "choice_of_goals", ("goals", "feasibility_constraints"), ("new_goal",),
        "autonet.proactive.choice:choose_goal"),
    FunctionContract(
        "world_knowledge", ("query",), ("knowledge",),
        "autonet.knowledge.repository:WorldKnowledge.query"),
    FunctionContract(
        "knowledge_manager", ("query",), ("processed_query",),
        "autonet.knowledge.repository:WorldKnowledge.prepare"),
    FunctionContract(
        "knowledge_repository", ("processed_query",), ("retrieval_knowledge",),
        "autonet.knowledge.repository:WorldKnowledge.retrieve"),
    FunctionContract(
        "human_agent_interaction", ("goal_intent_action_query",),
        ("linguistic_data",),
        "autonet.hai.service:HAIService.handle"),
    FunctionContract(
        "user_interface", ("goal_intent_action_query",), ("routed_submission",),
        "autonet.hai.service:HAIService.submit"),
    FunctionContract(
        "problem_solver", ("query", "knowledge"), ("linguistic_data",),
        "autonet.hai.solver:solve"),
    FunctionContract(
        "agent_agent_interaction", ("state", "goal"),
        ("updated_state", "updated_goal"),
        "autonet.interaction.pipeline:aai_exchange"),
    FunctionContract(
        "global_awareness", ("state",), ("updated_state",),
        "autonet.interaction.awareness:merge_global_state"),
    FunctionContract(
        "goal_coordination", ("goal",), ("updated_goal",),
        "autonet.interaction.coordination:coordinate_goals"),
)
