"""Exception types shared across modules."""


class DimensionError(ValueError):
    """Array shapes disagree with a model spec."""


class TrainingDiverged(FloatingPointError):
    def __init__(self, epoch: int, loss: float):
        super().__init__(f"training diverged at epoch {epoch} (loss={loss})")
        self.epoch = epoch
        self.loss = loss


class SingularDesignError(ValueError):
    def __init__(self, n_params: int, rank: int):
        super().__init__(
            f"design matrix is rank deficient: rank {rank} < {n_params} "
            f"({n_params - rank} deficient column(s))"
        )
        self.n_params = n_params
        self.rank = rank
        self.deficiency = n_params - rank


class ReplicateFailed(RuntimeError):
    def __init__(self, replicate_index: int, attempts: int, last_error: Exception):
        super().__init__(
            f"replicate {replicate_index} failed after {attempts} attempt(s): {last_error}"
        )
        self.replicate_index = replicate_index
        self.attempts = attempts
        self.last_error = last_error


class CsvParseError(ValueError):
    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.row = row
        self.column = column
