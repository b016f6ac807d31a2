# -*- coding: utf-8 *-*
"""certify-convex: Klee certificate of a grid region file"""
from MomentumCheck.data.loaders import load_region
from MomentumCheck.geometry.klee import klee_certify
from MomentumCheck.sessions.check_session import CheckSession


class ConvexitySession(CheckSession):
    @property
    def name(self):
        return 'certify_convex'

    def load(self):
        return load_region(self.config.file)

    def check(self, subject):
        return klee_certify(subject, self.config.radius)

    def exit_code(self, result):
        return 0 if result.is_convex else 1
