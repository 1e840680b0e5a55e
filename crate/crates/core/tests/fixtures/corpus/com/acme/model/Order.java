package com.acme.model;

import java.util.ArrayList;
import java.util.List;

public class Order extends Entity {
    private Customer customer;
    private List<Product> lines = new ArrayList<>();
    private int quantity;

    public Order(Customer customer) {
        this.customer = customer;
    }

    public void add(Product p) {
        lines.add(p);
        quantity++;
    }

    public List<Product> getLines() {
        return lines;
    }

    public Customer getCustomer() {
        return customer;
    }

    @Override
    public String describe() {
        return String.format("Order(%d lines)", lines.size());
    }
}
