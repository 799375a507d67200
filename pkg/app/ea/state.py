from typing import List, Optional

from app.ea.journey import JourneyPointer
from app.timetable.model import INFINITY, Timetable


class EaScanState:
    """
    Arreglos S, T y J de una consulta de llegada más temprana.

    Cada entrada lleva la época en que se escribió; `reset` solo incrementa
    la época, así que reutilizar el estado cuesta O(entradas tocadas).
    """

    def __init__(self, num_stops: int, num_trips: int):
        self.epoch = 1
        self._arrival: List[int] = [INFINITY] * num_stops
        self._arrival_epoch: List[int] = [0] * num_stops
        self._trip_entry: List[int] = [-1] * num_trips
        self._trip_epoch: List[int] = [0] * num_trips
        self._pointer: List[Optional[JourneyPointer]] = [None] * num_stops
        self._pointer_epoch: List[int] = [0] * num_stops

    @classmethod
    def for_timetable(cls, tt: Timetable) -> "EaScanState":
        return cls(tt.num_stops, tt.num_trips)

    def reset(self) -> None:
        self.epoch += 1

    def arrival(self, stop: int) -> int:
        if self._arrival_epoch[stop] == self.epoch:
            return self._arrival[stop]
        return INFINITY

    def set_arrival(self, stop: int, value: int) -> None:
        self._arrival[stop] = value
        self._arrival_epoch[stop] = self.epoch

    def trip_entry(self, trip: int) -> Optional[int]:
        """Id de la primera conexión alcanzada del trip, o None"""
        if self._trip_epoch[trip] == self.epoch:
            return self._trip_entry[trip]
        return None

    def set_trip_entry(self, trip: int, cid: int) -> None:
        self._trip_entry[trip] = cid
        self._trip_epoch[trip] = self.epoch

    def trip_reached(self, trip: int) -> bool:
        return self._trip_epoch[trip] == self.epoch

    def pointer(self, stop: int) -> Optional[JourneyPointer]:
        if self._pointer_epoch[stop] == self.epoch:
            return self._pointer[stop]
        return None

    def set_pointer(self, stop: int, pointer: JourneyPointer) -> None:
        self._pointer[stop] = pointer
        self._pointer_epoch[stop] = self.epoch

    def reached_trips(self) -> List[int]:
        return [trip for trip, epoch in enumerate(self._trip_epoch) if epoch == self.epoch]
