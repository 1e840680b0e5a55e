package com.acme.web;

import com.acme.model.Order;
import com.acme.store.Store;
import javax.servlet.http.HttpServlet;
import javax.servlet.http.HttpServletRequest;
import javax.servlet.http.HttpServletResponse;

@SuppressWarnings("serial")
public class CheckoutServlet extends HttpServlet {
    private Store store;

    @Override
    protected void doPost(HttpServletRequest req, HttpServletResponse resp) {
        String action = req.getParameter("action");
        // a brace in a comment: }
        String note = "closing } and opening { inside a string";
        if ("step0".equals(action)) {
            resp.setHeader("X-Step", "0");
        }
        if ("step1".equals(action)) {
            resp.setHeader("X-Step", "1");
        }
        if ("step2".equals(action)) {
            resp.setHeader("X-Step", "2");
        }
        if ("step3".equals(action)) {
            resp.setHeader("X-Step", "3");
        }
        if ("step4".equals(action)) {
            resp.setHeader("X-Step", "4");
        }
        if ("step5".equals(action)) {
            resp.setHeader("X-Step", "5");
        }
        if ("step6".equals(action)) {
            resp.setHeader("X-Step", "6");
        }
        if ("step7".equals(action)) {
            resp.setHeader("X-Step", "7");
        }
        if ("step8".equals(action)) {
            resp.setHeader("X-Step", "8");
        }
        if ("step9".equals(action)) {
            resp.setHeader("X-Step", "9");
        }
        if ("step10".equals(action)) {
            resp.setHeader("X-Step", "10");
        }
        if ("step11".equals(action)) {
            resp.setHeader("X-Step", "11");
        }
        if ("step12".equals(action)) {
            resp.setHeader("X-Step", "12");
        }
        if ("step13".equals(action)) {
            resp.setHeader("X-Step", "13");
        }
        if ("step14".equals(action)) {
            resp.setHeader("X-Step", "14");
        }
        if ("step15".equals(action)) {
            resp.setHeader("X-Step", "15");
        }
        if ("step16".equals(action)) {
            resp.setHeader("X-Step", "16");
        }
        if ("step17".equals(action)) {
            resp.setHeader("X-Step", "17");
        }
        if ("step18".equals(action)) {
            resp.setHeader("X-Step", "18");
        }
        if ("step19".equals(action)) {
            resp.setHeader("X-Step", "19");
        }
        if ("step20".equals(action)) {
            resp.setHeader("X-Step", "20");
        }
        if ("step21".equals(action)) {
            resp.setHeader("X-Step", "21");
        }
        if ("step22".equals(action)) {
            resp.setHeader("X-Step", "22");
        }
        if ("step23".equals(action)) {
            resp.setHeader("X-Step", "23");
        }
        if ("step24".equals(action)) {
            resp.setHeader("X-Step", "24");
        }
        if ("step25".equals(action)) {
            resp.setHeader("X-Step", "25");
        }
        if ("step26".equals(action)) {
            resp.setHeader("X-Step", "26");
        }
        if ("step27".equals(action)) {
            resp.setHeader("X-Step", "27");
        }
        if ("step28".equals(action)) {
            resp.setHeader("X-Step", "28");
        }
        if ("step29".equals(action)) {
            resp.setHeader("X-Step", "29");
        }
        if ("step30".equals(action)) {
            resp.setHeader("X-Step", "30");
        }
        if ("step31".equals(action)) {
            resp.setHeader("X-Step", "31");
        }
        if ("step32".equals(action)) {
            resp.setHeader("X-Step", "32");
        }
        if ("step33".equals(action)) {
            resp.setHeader("X-Step", "33");
        }
        if ("step34".equals(action)) {
            resp.setHeader("X-Step", "34");
        }
        if ("step35".equals(action)) {
            resp.setHeader("X-Step", "35");
        }
        if ("step36".equals(action)) {
            resp.setHeader("X-Step", "36");
        }
        if ("step37".equals(action)) {
            resp.setHeader("X-Step", "37");
        }
        resp.setStatus(200);
        resp.setStatus(200);
        resp.setStatus(200);
    }

    Order currentOrder(HttpServletRequest req) {
        return null;
    }
}
