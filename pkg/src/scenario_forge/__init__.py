"""scenario-forge: multi-modal traffic scenario compiler and test harness.

Pipeline: a textual front-end (language-model extraction) and a visual
front-end (detection geometry) each produce a scenario IR; an alignment
pass merges them under per-field modality priorities; code generation
lowers the merged IR onto a map section and emits simulator scripts.  A
desk-scale kinematic testbed with failure oracles and a mutation fuzzer
consume the generated scenarios, and an evaluation kit scores IR fidelity
with a tree-edit-distance accuracy metric.
"""

__version__ = "0.1.0"
