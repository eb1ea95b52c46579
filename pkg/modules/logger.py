import logging

ROOT_NAME = "HodgeVerifier"
DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def module_logger(name):
    """Child of the verifier's root logger, so library messages reach its handlers."""
    return logging.getLogger(f"{ROOT_NAME}.{name.rsplit('.', 1)[-1]}")


class Logger:
    def __init__(self, config):
        """Initialize the logger from the "logger" section of the verifier config."""
        self.logger = logging.getLogger(config.get("name", ROOT_NAME))
        self.logger.setLevel(config.get("level", logging.INFO))
        self.logger.propagate = False
        fmt = logging.Formatter(config.get("format", DEFAULT_FORMAT))

        # Logger objects are process-wide; drop handlers left by an earlier run
        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)
            handler.close()

        # Log to file if a path is provided
        logfile = config.get("logfile")
        if logfile:
            file_handler = logging.FileHandler(logfile)
            file_handler.setFormatter(fmt)
            self.logger.addHandler(file_handler)

        # Log to console (stderr) if enabled
        if config.get("console", False):
            console_handler = logging.StreamHandler()
            console_handler.setFormatter(fmt)
            self.logger.addHandler(console_handler)

        if not self.logger.handlers:
            self.logger.addHandler(logging.NullHandler())

    def info(self, message):
        """Log an informational message."""
        self.logger.info(message)

    def warning(self, message):
        """Log a warning message."""
        self.logger.warning(message)

    def error(self, message):
        """Log an error message."""
        self.logger.error(message)

    def debug(self, message):
        """Log a debug message."""
        self.logger.debug(message)

    def critical(self, message):
        """Log a critical message."""
        self.logger.critical(message)

    def exception(self, message):
        """Log an error message together with the active traceback."""
        self.logger.exception(message)

    def close(self):
        """Flush and detach all handlers."""
        for handler in list(self.logger.handlers):
            handler.flush()
            handler.close()
            self.logger.removeHandler(handler)
