# -*- coding: utf-8 *-*
"""diagnose: openness of a scene onto its image"""
import os

from MomentumCheck.data.loaders import load_scene
from MomentumCheck.diagnosis.openness import (DEFAULT_H, DEFAULT_SAMPLES,
                                              DiagnosisParams, diagnose)
from MomentumCheck.diagnosis.scene import Scene
from MomentumCheck.errors import InputError
from MomentumCheck.scenes.builtin import builtin_scene
from MomentumCheck.sessions.check_session import CheckSession


class DiagnoseSession(CheckSession):
    @property
    def name(self):
        return 'diagnose'

    def load(self):
        if self.config.file:
            return load_scene(self.config.file)
        sc = builtin_scene(self.config.scene)
        if not isinstance(sc, Scene):
            raise InputError("'{0}' is a discrete space; use the lgp command".format(self.config.scene))
        return sc

    def check(self, subject):
        c = self.config
        dump = os.path.join(c.out, '{0}_points.tsv'.format(subject.name)) if c.out else None
        params = DiagnosisParams(h=c.h_or(DEFAULT_H), n_samples=c.samples or DEFAULT_SAMPLES,
                                 seed=c.seed, dump_path=dump)
        verdict = diagnose(subject, params)
        verdict.details['scene'] = subject.name
        return verdict

    def exit_code(self, result):
        return 0 if result.open_onto_image else 1
