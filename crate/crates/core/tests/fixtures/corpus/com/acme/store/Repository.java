package com.acme.store;

import java.util.List;

public interface Repository<T> {
    T find(long id);

    List<T> findAll();

    void save(T item);
}
