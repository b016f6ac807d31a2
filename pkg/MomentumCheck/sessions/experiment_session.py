# -*- coding: utf-8 *-*
"""experiment: Schur-Horn, toric and Horn interval experiments"""
from MomentumCheck.data.loaders import load_scene
from MomentumCheck.errors import InputError
from MomentumCheck.scenes.builtin import builtin_scene
from MomentumCheck.scenes.experiments import (DEFAULT_TORIC_H, DEFAULT_TORIC_SAMPLES,
                                              DEFAULT_TRIALS, horn_interval_experiment,
                                              schur_horn_experiment,
                                              toric_polytope_experiment)
from MomentumCheck.sessions.check_session import CheckSession

EXPERIMENTS = ['schur-horn', 'toric', 'horn']


class ExperimentSession(CheckSession):
    @property
    def name(self):
        return self.config.experiment.replace('-', '_')

    def load(self):
        c = self.config
        if c.experiment not in EXPERIMENTS:
            raise InputError("unknown experiment '{0}'; available: {1}"
                             .format(c.experiment, ', '.join(EXPERIMENTS)))
        if c.experiment != 'toric':
            return None
        if c.file:
            return load_scene(c.file)
        return builtin_scene(c.scene or 'cp2_toric')

    def check(self, subject):
        c = self.config
        trials = c.trials or DEFAULT_TRIALS
        if c.experiment == 'schur-horn':
            if c.lam is None:
                raise InputError("schur-horn needs --lambda")
            return schur_horn_experiment(c.lam, trials, c.tol, c.seed, c.out)
        if c.experiment == 'horn':
            if c.a is None or c.b is None:
                raise InputError("horn needs --a and --b")
            return horn_interval_experiment(c.a, c.b, trials, c.tol, c.seed, out_dir=c.out)
        return toric_polytope_experiment(subject, c.samples or DEFAULT_TORIC_SAMPLES,
                                         c.h_or(DEFAULT_TORIC_H), c.seed, c.out)

    def exit_code(self, result):
        return 0 if result.passed else 1
