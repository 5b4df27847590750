"""场景合成模块"""

from internal.scene.scenario import (
    Waveform, Target, Interferer, Scenario, load_scenario, dump_scenario, JAMMER_MODELS,
)
from internal.scene.waveform import transmit_pulse, pulse_train
from internal.scene.channelizer import channelize, dechannelize
from internal.scene.synthesizer import (
    SubbandSnapshots, GroundTruth, TargetTruth, synthesize, ground_truth,
)
from internal.scene.library import scenario_library, scenario_names, scenario_description

__all__ = [
    "Waveform", "Target", "Interferer", "Scenario", "load_scenario", "dump_scenario", "JAMMER_MODELS",
    "transmit_pulse", "pulse_train",
    "channelize", "dechannelize",
    "SubbandSnapshots", "GroundTruth", "TargetTruth", "synthesize", "ground_truth",
    "scenario_library", "scenario_names", "scenario_description",
]
