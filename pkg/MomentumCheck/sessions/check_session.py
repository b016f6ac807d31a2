# -*- coding: utf-8 *-*
"""Base class of the command sessions

A session loads its input, runs one check and turns the result into an
exit code and a report. The report goes to stdout (JSON or TSV) and, when
an output directory is configured, to `<out>/<name>.json`.

"""
import logging
import sys

import pandas as pd

from MomentumCheck.util.data_util import jsonable, to_json_text, write_json_report

log = logging.getLogger(__name__)

LOG_FORMAT = '%(name)s: %(message)s'


def configure_logging(verbose):
    """Progress lines on stderr when verbose"""
    root = logging.getLogger('MomentumCheck')
    if verbose and not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
    root.setLevel(logging.INFO if verbose else logging.WARNING)


def report_tsv(payload):
    """Flattened key / value table of a report"""
    frame = pd.json_normalize(jsonable(payload), sep='.')
    table = frame.T.reset_index()
    table.columns = ['key', 'value']
    return table.to_csv(sep='\t', index=False)


class CheckSession(object):
    def __init__(self, config, verbose=False):
        """CheckSession class initializer

        Args:
            config (RunConfig): Validated run configuration
            verbose (:obj:`bool`, optional): Log progress to stderr

        """
        self.config = config
        self._verbose = verbose
        configure_logging(verbose)

    @property
    def name(self):
        """Name of the session, used for the report file"""
        raise NotImplementedError("name the session here")

    def load(self):
        """Load or build the object under test"""
        raise NotImplementedError("load the input here")

    def check(self, subject):
        """Run the check; the result must have a to_dict method"""
        raise NotImplementedError("run the check here")

    def exit_code(self, result):
        """Exit code of a result"""
        raise NotImplementedError("map the result to an exit code")

    def report(self, result):
        payload = dict(result.to_dict())
        payload['command'] = self.name
        return payload

    def run(self, stream=None):
        """Load, check and report

        Returns:
            tuple: (exit code, report dict)
        """
        stream = stream or sys.stdout
        subject = self.load()
        if self._verbose:
            log.info("%s: input loaded", self.name)
        result = self.check(subject)
        code = self.exit_code(result)
        payload = self.report(result)
        if self.config.out:
            path = write_json_report(self.config.out, self.name, payload)
            log.info("report written to %s", path)
        if self.config.format == 'tsv':
            stream.write(report_tsv(payload))
        else:
            stream.write(to_json_text(payload))
        return code, payload
