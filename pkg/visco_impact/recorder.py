'''A context-manager to capture the warnings and log records produced while a
block of solver code runs. Used by the verification command to attach notes to
each suite without letting them leak onto stderr.'''

import logging
import warnings


class _ListHandler(logging.Handler):
    '''Append formatted records to a list'''
    def __init__(self, sink):
        logging.Handler.__init__(self)
        self._sink = sink

    def emit(self, record):
        self._sink.append({
            'channel': record.name,
            'level': record.levelname,
            'data': record.getMessage()})


class Recorder(object):
    '''Capture anything the package says while the block is active'''
    __name__ = 'Recorder'

    def __init__(self, logger_name='visco_impact', level=logging.INFO):
        self._logger = logging.getLogger(logger_name)
        self._level = level
        self._catcher = None
        self._caught = None
        self._handler = None
        self._saved_level = None
        # Records seen during the most recent block
        self.log = []

    def __enter__(self):
        self.log = []
        self._handler = _ListHandler(self.log)
        self._handler.setLevel(self._level)
        self._saved_level = self._logger.level
        if self._logger.level == logging.NOTSET or self._logger.level > self._level:
            self._logger.setLevel(self._level)
        self._logger.addHandler(self._handler)
        self._catcher = warnings.catch_warnings(record=True)
        self._caught = self._catcher.__enter__()
        warnings.simplefilter('always')
        return self

    def __exit__(self, typ, val, traceback):
        self._catcher.__exit__(typ, val, traceback)
        self._logger.removeHandler(self._handler)
        self._logger.setLevel(self._saved_level)
        for warning in self._caught:
            self.log.append({
                'channel': warning.category.__name__,
                'level': 'WARNING',
                'data': str(warning.message)})
        return False

    def messages(self):
        '''Just the message text, in order'''
        return [entry['data'] for entry in self.log]
