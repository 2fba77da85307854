"""
Monte-Carlo simulation, cellular drops and throughput statistics

Submodules are imported directly (analysis.simulator, analysis.cellular,
analysis.statistics); strategy depends on analysis.simulator.
"""
