# -*- coding: utf-8 *-*
"""lgp: local to global check of a discrete space or a discretized scene"""
from MomentumCheck.data.loaders import load_input
from MomentumCheck.diagnosis.scene import Scene
from MomentumCheck.errors import InputError
from MomentumCheck.lgp.engine import LgpParams, lgp_exit_code, lgp_verdict
from MomentumCheck.lgp.space import DiscreteSpace
from MomentumCheck.scenes.builtin import builtin_scene
from MomentumCheck.scenes.discretize import (DEFAULT_H, DiscretizationParams,
                                             scene_lgp_verdict)
from MomentumCheck.sessions.check_session import CheckSession


class LgpSession(CheckSession):
    @property
    def name(self):
        return 'lgp'

    def load(self):
        c = self.config
        subject = load_input(c.file) if c.file else builtin_scene(c.scene)
        if not isinstance(subject, (Scene, DiscreteSpace)):
            raise InputError("the lgp command needs a discrete space or a scene")
        return subject

    def check(self, subject):
        c = self.config
        params = LgpParams(rel_radius=c.radius)
        if isinstance(subject, Scene):
            discretization = DiscretizationParams(h=c.h_or(DEFAULT_H), seed=c.seed,
                                                  **({'n_samples': c.samples} if c.samples else {}))
            return scene_lgp_verdict(subject, discretization, params)
        return lgp_verdict(subject, params)

    def exit_code(self, result):
        return lgp_exit_code(result)
