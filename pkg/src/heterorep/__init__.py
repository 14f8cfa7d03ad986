"""Heterogeneous document representations for fake-news classification.

Builds stylometric, LSA and knowledge-graph document blocks, stacks them
into scenarios, trains linear and neural classifiers, and runs the feature
ranking / subset ablation analyses.  See the ``heterorep`` CLI for the
end-to-end pipeline.
"""

__version__ = "0.1.0"
